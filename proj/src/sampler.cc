#include "harnack/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRangeTol = 1e-9;
// The joint (dW, eta) covariance has eigenvalues of order delta and
// delta^3 |A|^2 / 12, so the cutoff sits well below the default.
constexpr double kJointRankTol = 1e-14;

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ']';
  return os.str();
}

// Scratch buffers for one worker's path recursion.
struct PathScratch {
  Vector z;
  Vector joint;
  Vector tmp;
};

}  // namespace

McEstimate summarize(std::span<const double> values, std::uint64_t seed) {
  McEstimate est;
  est.n = static_cast<std::int64_t>(values.size());
  est.seed = seed;
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return est;
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return est;
}

VarianceEstimate sample_variance(std::span<const double> values) {
  VarianceEstimate out;
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  out.variance = m2 / (n - 1.0);
  const double spread = m4 / n - (m2 / n) * (m2 / n);
  out.std_error = std::sqrt(std::max(spread, 0.0) / n);
  return out;
}

// --- endpoint ---------------------------------------------------------------

EndpointSampler::EndpointSampler(const OuLevyModel& model, double t)
    : model_(&model), snap_(model.snapshot(t)), diagonal_drift_(model.drift_is_diagonal()) {}

Matrix EndpointSampler::jump_transport(double s) const {
  const Matrix& A = model_->drift();
  if (diagonal_drift_) {
    return (A.diagonal().array() * s).exp().matrix().asDiagonal();
  }
  return matrix_exponential(A, s);
}

Vector EndpointSampler::jump_part(RngStream& rng) const {
  const int d = model_->dim();
  Vector J = Vector::Zero(d);
  if (!model_->has_jumps()) return J;
  const auto& jump = *model_->jump();
  const std::uint64_t count = rng.poisson(jump.rate() * snap_.t);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double v = snap_.t * rng.uniform();
    const Vector xi = jump.sample(rng);
    if (diagonal_drift_) {
      J.array() += (model_->drift().diagonal().array() * v).exp() * xi.array();
    } else {
      J.noalias() += jump_transport(v) * xi;
    }
  }
  return J;
}

Vector EndpointSampler::noise(RngStream& rng) const {
  const auto& L = snap_.gramian_factor.factor();
  Vector out = snap_.offset;
  if (L.cols() > 0) {
    Vector z(L.cols());
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
    out.noalias() += L * z;
  }
  if (model_->has_jumps()) out += jump_part(rng);
  return out;
}

Vector sample_ou_endpoint(const OuLevyModel& model, double t, const Vector& x, RngStream& rng) {
  return EndpointSampler(model, t).sample(x, rng);
}

McEstimate estimate_semigroup(const OuLevyModel& model, double t, const Vector& x,
                              const TestFunction& f, std::int64_t n, std::uint64_t seed,
                              ExecPolicy policy) {
  if (n < 100) throw std::invalid_argument("estimate_semigroup: n must be >= 100");
  auto columns = sample_functionals(model, t, {x}, {f}, n, seed, policy);
  return summarize(columns.front(), seed);
}

std::vector<std::vector<double>> sample_functionals(const OuLevyModel& model, double t,
                                                    const std::vector<Vector>& starts,
                                                    const std::vector<TestFunction>& fns,
                                                    std::int64_t n, std::uint64_t seed,
                                                    ExecPolicy policy) {
  if (n < 1) throw std::invalid_argument("sample_functionals: n must be >= 1");
  for (const auto& x : starts) {
    if (x.size() != model.dim()) throw std::invalid_argument("sample_functionals: start dimension mismatch");
  }
  const EndpointSampler sampler(model, t);
  std::vector<Vector> shifted;
  for (const auto& x : starts) shifted.push_back(sampler.snapshot().T * x);
  std::vector<std::vector<double>> out(starts.size() * fns.size(), std::vector<double>(n));
  for_each_replicate(
      n,
      [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const Vector noise = sampler.noise(rng);
        for (std::size_t s = 0; s < starts.size(); ++s) {
          const Vector endpoint = shifted[s] + noise;
          for (std::size_t j = 0; j < fns.size(); ++j) {
            const double v = fns[j](endpoint);
            if (!std::isfinite(v)) {
              throw std::domain_error("non-finite test function value at endpoint " +
                                      format_vector(endpoint) + " (replicate " +
                                      std::to_string(i) + ")");
            }
            out[s * fns.size() + j][i] = v;
          }
        }
      },
      policy);
  return out;
}

// --- W_A paths --------------------------------------------------------------

std::vector<double> uniform_time_grid(double t, int K) {
  if (!(t > 0.0) || K < 1) throw std::invalid_argument("uniform_time_grid: need t > 0 and K >= 1");
  std::vector<double> grid(K + 1);
  for (int k = 0; k <= K; ++k) grid[k] = t * static_cast<double>(k) / K;
  grid[K] = t;
  return grid;
}

WaPathSampler::WaPathSampler(const OuLevyModel& model, std::vector<double> grid)
    : grid_(std::move(grid)), dim_(model.dim()) {
  if (grid_.size() < 2) throw std::invalid_argument("wa_path: grid needs at least two points");
  if (grid_.front() != 0.0) throw std::invalid_argument("wa_path: grid must start at 0");
  const Matrix& A = model.drift();
  const Matrix& R = model.noise_cov();
  const Matrix root = model.noise_factor().sqrt();
  const int d = dim_;
  kernel_of_step_.resize(grid_.size() - 1);
  for (std::size_t k = 0; k + 1 < grid_.size(); ++k) {
    const double delta = grid_[k + 1] - grid_[k];
    if (!(delta > 0.0)) throw std::invalid_argument("wa_path: grid must be strictly increasing");
    auto found = std::find_if(kernels_.begin(), kernels_.end(),
                              [delta](const StepKernel& s) { return s.delta == delta; });
    if (found == kernels_.end()) {
      StepKernel kernel;
      kernel.delta = delta;
      kernel.T = matrix_exponential(A, delta);
      Matrix joint(2 * d, 2 * d);
      const Matrix cross = integrated_exponential(A, delta) * root;
      joint.topLeftCorner(d, d) = delta * Matrix::Identity(d, d);
      joint.bottomRightCorner(d, d) = gramian(A, R, delta);
      joint.bottomLeftCorner(d, d) = cross;
      joint.topRightCorner(d, d) = cross.transpose();
      kernel.joint_factor = PsdFactorization(joint, kJointRankTol).factor();
      kernels_.push_back(std::move(kernel));
      found = kernels_.end() - 1;
    }
    kernel_of_step_[k] = static_cast<int>(found - kernels_.begin());
  }
}

namespace {

template <class Kernel>
void advance(const Kernel& kernel, int d, RngStream& rng, PathScratch& scratch, Vector& state,
             Vector& increment) {
  const Matrix& L = kernel.joint_factor;
  scratch.z.resize(L.cols());
  for (Eigen::Index j = 0; j < L.cols(); ++j) scratch.z(j) = rng.normal();
  scratch.joint.noalias() = L * scratch.z;
  increment = scratch.joint.head(d);
  scratch.tmp.noalias() = kernel.T * state;
  state = scratch.tmp + scratch.joint.tail(d);
}

}  // namespace

void WaPathSampler::step(int k, RngStream& rng, Vector& state, Vector& increment) const {
  thread_local PathScratch scratch;
  advance(kernels_[kernel_of_step_[k]], dim_, rng, scratch, state, increment);
}

WaPath WaPathSampler::sample(RngStream& rng) const {
  WaPath path;
  const int K = steps();
  path.states.reserve(K + 1);
  path.increments.reserve(K);
  PathScratch scratch;
  Vector state = Vector::Zero(dim_);
  Vector increment(dim_);
  path.states.push_back(state);
  for (int k = 0; k < K; ++k) {
    advance(kernels_[kernel_of_step_[k]], dim_, rng, scratch, state, increment);
    path.states.push_back(state);
    path.increments.push_back(increment);
  }
  return path;
}

WaPath wa_path(const OuLevyModel& model, const std::vector<double>& grid, RngStream& rng) {
  return WaPathSampler(model, grid).sample(rng);
}

// --- Girsanov ---------------------------------------------------------------

double GirsanovWeight::rho() const { return std::exp(log_rho); }

GirsanovWeight girsanov_weight(const OuLevyModel& model, const std::vector<double>& grid,
                               const std::vector<Vector>& increments,
                               const std::vector<Vector>& controls) {
  if (grid.size() < 2) throw std::invalid_argument("girsanov_weight: grid needs at least two points");
  const std::size_t K = grid.size() - 1;
  if (increments.size() != K) {
    throw std::invalid_argument("girsanov_weight: " + std::to_string(increments.size()) +
                                " increments for a grid with " + std::to_string(K) + " steps");
  }
  if (controls.size() < K) throw std::invalid_argument("girsanov_weight: too few control values");
  GirsanovWeight w;
  for (std::size_t k = 0; k < K; ++k) {
    if (increments[k].size() != model.dim() || controls[k].size() != model.dim()) {
      throw std::invalid_argument("girsanov_weight: dimension mismatch at step " + std::to_string(k));
    }
    const double delta = grid[k + 1] - grid[k];
    const double usq = controls[k].squaredNorm();
    w.log_rho += controls[k].dot(increments[k]) - 0.5 * usq * delta;
    w.integral_psi_sq += usq * delta;
  }
  return w;
}

// --- coupled pair -----------------------------------------------------------

CoupledPairSampler::CoupledPairSampler(const OuLevyModel& model, double t, Vector x, Vector y, int K)
    : model_(&model),
      t_(t),
      x_(std::move(x)),
      y_(std::move(y)),
      control_(sample_and_hold_control(model, t, y_ - x_, K)),
      paths_(model, uniform_time_grid(t, K)),
      jumps_(model, t) {
  if (!control_.feasible) {
    throw std::domain_error("sample_coupled_pair: x - y is outside the domain of Gamma_t (" +
                            control_.note + ")");
  }
  const double delta = control_.step();
  const SemigroupSnapshot cell = model.snapshot(delta);
  step_T_ = cell.T;
  step_offset_ = cell.offset;
  input_ = integrated_exponential(model.drift(), delta) * model.noise_factor().sqrt();
}

CoupledSample CoupledPairSampler::sample(RngStream& rng) const {
  const int K = paths_.steps();
  const double delta = control_.step();
  Vector w = Vector::Zero(model_->dim());
  Vector increment(model_->dim());
  Vector wa_prev = w;
  Vector Y = y_;
  Vector X = x_;
  GirsanovWeight weight;
  for (int k = 0; k < K; ++k) {
    wa_prev = w;
    paths_.step(k, rng, w, increment);
    const Vector eta = w - step_T_ * wa_prev;
    const Vector& u = control_.values[k];
    Y = step_T_ * Y + step_offset_ + eta;
    X = step_T_ * X + step_offset_ + eta - input_ * u;
    const double usq = u.squaredNorm();
    weight.log_rho += u.dot(increment) - 0.5 * usq * delta;
    weight.integral_psi_sq += usq * delta;
  }
  const Vector J = jumps_.jump_part(rng);
  CoupledSample out;
  out.endpoint = Y + J;
  out.shifted_endpoint = X + J;
  out.weight = weight;
  return out;
}

CoupledSample sample_coupled_pair(const OuLevyModel& model, double t, const Vector& x,
                                  const Vector& y, int K, RngStream& rng) {
  return CoupledPairSampler(model, t, x, y, K).sample(rng);
}

// --- semilinear -------------------------------------------------------------

std::vector<SemilinearSample> semilinear_replicates(const OuLevyModel& model,
                                                    const SemilinearSpec& spec, double t,
                                                    const Vector& x, const TestFunction& f,
                                                    std::int64_t n, int K, std::uint64_t seed,
                                                    ExecPolicy policy) {
  if (model.has_jumps()) throw std::invalid_argument("semilinear: model must be jump-free");
  if (!spec.F) throw std::invalid_argument("semilinear: empty F");
  if (n < 2) throw std::invalid_argument("semilinear: n must be >= 2");
  if (x.size() != model.dim()) throw std::invalid_argument("semilinear: x dimension mismatch");
  const int d = model.dim();
  const WaPathSampler paths(model, uniform_time_grid(t, K));
  const double delta = t / K;
  const SemigroupSnapshot cell = model.snapshot(delta);
  // T_{t_k} x + m_{t_k}
  std::vector<Vector> mean_path(K + 1);
  mean_path[0] = x;
  for (int k = 0; k < K; ++k) mean_path[k + 1] = cell.T * mean_path[k] + cell.offset;
  const auto& root = model.noise_factor();

  std::vector<SemilinearSample> out(n);
  for_each_replicate(
      n,
      [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Vector w = Vector::Zero(d);
        Vector increment(d);
        Vector state(d);
        SemilinearSample sample;
        double prev_sq = 0.0;
        for (int k = 0; k < K; ++k) {
          state = w + mean_path[k];
          const Vector drift = spec.F(state);
          if (!root.in_range(drift, kRangeTol)) {
            throw std::domain_error("semilinear: F leaves the range of R^{1/2} at state " +
                                    format_vector(state));
          }
          const Vector psi = root.apply_pinv_sqrt(drift);
          paths.step(k, rng, w, increment);
          sample.log_rho += psi.dot(increment) - 0.5 * psi.squaredNorm() * delta;
          const double next_sq = w.squaredNorm();
          sample.wa_energy += 0.5 * delta * (prev_sq + next_sq);
          prev_sq = next_sq;
        }
        state = w + mean_path[K];
        sample.f_value = f(state);
        if (!std::isfinite(sample.f_value) || !std::isfinite(sample.log_rho)) {
          throw std::domain_error("semilinear: non-finite value at endpoint " + format_vector(state));
        }
        out[i] = sample;
      },
      policy);
  return out;
}

SemilinearEstimate semilinear_estimate_detailed(const OuLevyModel& model,
                                                const SemilinearSpec& spec, double t,
                                                const Vector& x, const TestFunction& f,
                                                std::int64_t n, int K, std::uint64_t seed,
                                                ExecPolicy policy) {
  SemilinearEstimate est;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto samples = semilinear_replicates(model, spec, t, x, f, n, K, seed, policy);
    std::vector<double> values(n), rhos(n);
    for (std::int64_t i = 0; i < n; ++i) {
      rhos[i] = std::exp(samples[i].log_rho);
      values[i] = rhos[i] * samples[i].f_value;
    }
    est.value = summarize(values, seed);
    est.rho = summarize(rhos, seed);
    est.grid_steps = K;
    if (std::abs(est.rho.mean - 1.0) <= 3.0 * est.rho.std_error) break;
    K *= 2;
  }
  return est;
}

McEstimate semilinear_estimate(const OuLevyModel& model, const SemilinearSpec& spec, double t,
                               const Vector& x, const TestFunction& f, std::int64_t n, int K,
                               std::uint64_t seed, ExecPolicy policy) {
  return semilinear_estimate_detailed(model, spec, t, x, f, n, K, seed, policy).value;
}

// --- exponential moments of W_A ----------------------------------------------

McEstimate exp_functional_estimate(const OuLevyModel& model, double t, double lambda,
                                   std::int64_t n, int K, std::uint64_t seed, ExecPolicy policy) {
  if (n < 2) throw std::invalid_argument("exp_functional_estimate: n must be >= 2");
  const WaPathSampler paths(model, uniform_time_grid(t, K));
  const double delta = t / K;
  const int d = model.dim();
  std::vector<double> values(n);
  for_each_replicate(
      n,
      [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Vector w = Vector::Zero(d);
        Vector increment(d);
        double energy = 0.0, prev_sq = 0.0;
        for (int k = 0; k < K; ++k) {
          paths.step(k, rng, w, increment);
          const double next_sq = w.squaredNorm();
          energy += 0.5 * delta * (prev_sq + next_sq);
          prev_sq = next_sq;
        }
        values[i] = std::exp(lambda * energy);
      },
      policy);
  return summarize(values, seed);
}

double ExpMomentConstants::horizon(double lambda) const {
  if (!(lambda > 0.0) || !(theta > 0.0)) return kInf;
  return std::min(1.0, 1.0 / (4.0 * theta * lambda));
}

double ExpMomentConstants::bound(double lambda, double t) const {
  return std::pow(c0, 4.0 * theta * lambda * t);
}

ExpMomentConstants exp_moment_constants(const OuLevyModel& model) {
  ExpMomentConstants out;
  out.theta = gramian(model.drift(), model.noise_cov(), 1.0).trace();
  if (!(out.theta > 0.0)) {
    out.c0 = 1.0;
    return out;
  }
  // s -> R_s is Loewner-increasing, so the sup sits at s = 1; the grid is a guard.
  const int d = model.dim();
  constexpr int kProbe = 64;
  for (int j = 1; j <= kProbe; ++j) {
    const double s = static_cast<double>(j) / kProbe;
    const Matrix M = Matrix::Identity(d, d) - gramian(model.drift(), model.noise_cov(), s) / (2.0 * out.theta);
    const double det = M.determinant();
    out.c0 = std::max(out.c0, det > 0.0 ? 1.0 / std::sqrt(det) : kInf);
  }
  return out;
}

McEstimate wa_square_mgf_estimate(const OuLevyModel& model, double s, double scale,
                                  std::int64_t n, std::uint64_t seed, ExecPolicy policy) {
  if (n < 2) throw std::invalid_argument("wa_square_mgf_estimate: n must be >= 2");
  const SemigroupSnapshot snap = model.snapshot(s);
  const auto& L = snap.gramian_factor.factor();
  std::vector<double> values(n);
  for_each_replicate(
      n,
      [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Vector z(L.cols());
        for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
        values[i] = std::exp(scale * (L * z).squaredNorm());
      },
      policy);
  return summarize(values, seed);
}

}  // namespace harnack
