#include "harnack/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "harnack/quadrature.h"

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRangeTol = 1e-9;

bool is_diagonal(const Matrix& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (i != j && M(i, j) != 0.0) return false;
  return true;
}

}  // namespace

CompoundPoissonSpec CompoundPoissonSpec::from_atoms(double rate, std::vector<JumpAtom> atoms) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("jump: rate must be > 0");
  if (atoms.empty()) throw std::invalid_argument("jump: empty atom list");
  CompoundPoissonSpec spec;
  spec.rate_ = rate;
  spec.dim_ = static_cast<int>(atoms.front().value.size());
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (atom.value.size() != spec.dim_) throw std::invalid_argument("jump: atom dimension mismatch");
    if (!atom.value.allFinite()) throw std::invalid_argument("jump: non-finite atom");
    if (!(atom.prob >= 0.0)) throw std::invalid_argument("jump: negative atom probability");
    total += atom.prob;
    spec.cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("jump: atom probabilities sum to " + std::to_string(total));
  }
  spec.cumulative_.back() = 1.0;
  spec.atoms_ = std::move(atoms);
  return spec;
}

CompoundPoissonSpec CompoundPoissonSpec::from_sampler(double rate, int dim, JumpSampler sampler,
                                                      ExpMoment exp_moment) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("jump: rate must be > 0");
  if (!sampler) throw std::invalid_argument("jump: empty sampler");
  CompoundPoissonSpec spec;
  spec.rate_ = rate;
  spec.dim_ = dim;
  spec.sampler_ = std::move(sampler);
  spec.exp_moment_ = std::move(exp_moment);
  return spec;
}

Vector CompoundPoissonSpec::sample(RngStream& rng) const {
  if (!has_atoms()) return sampler_(rng);
  const double u = rng.uniform();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(it - cumulative_.begin(), atoms_.size() - 1);
  return atoms_[idx].value;
}

double CompoundPoissonSpec::exp_moment(const Vector& c) const {
  if (has_atoms()) {
    double sum = 0.0;
    for (const auto& atom : atoms_) sum += atom.prob * std::exp(c.dot(atom.value));
    return sum;
  }
  if (!exp_moment_) throw std::logic_error("jump: no exponential moment available for sampler law");
  return exp_moment_(c);
}

double CompoundPoissonSpec::second_moment() const {
  if (has_atoms()) {
    double sum = 0.0;
    for (const auto& atom : atoms_) sum += atom.prob * atom.value.squaredNorm();
    return sum;
  }
  RngStream rng(0x5eed, 0);
  double sum = 0.0;
  constexpr int kProbe = 1000;
  for (int i = 0; i < kProbe; ++i) sum += sampler_(rng).squaredNorm();
  return sum / kProbe;
}

OuLevyModel::OuLevyModel(Matrix A, Matrix R, Vector a, std::optional<CompoundPoissonSpec> jump)
    : A_(std::move(A)), R_(std::move(R)), a_(std::move(a)), jump_(std::move(jump)) {
  if (A_.rows() == 0 || A_.rows() != A_.cols()) throw std::invalid_argument("model: A must be square and nonempty");
  const auto d = A_.rows();
  if (R_.rows() != d || R_.cols() != d) throw std::invalid_argument("model: R dimension mismatch");
  if (a_.size() != d) throw std::invalid_argument("model: a dimension mismatch");
  if (!A_.allFinite() || !a_.allFinite()) throw std::invalid_argument("model: non-finite entries");
  require_psd(R_, "model: R");
  if (jump_ && jump_->dim() != d) throw std::invalid_argument("model: jump dimension mismatch");
  noise_factor_ = PsdFactorization(R_);
}

bool OuLevyModel::drift_is_diagonal() const { return is_diagonal(A_); }
bool OuLevyModel::noise_is_diagonal() const { return is_diagonal(R_); }

bool OuLevyModel::is_symmetric_case(double tol) const {
  const Matrix root = noise_factor_.sqrt();
  const Matrix lhs = A_ * root;
  const Matrix rhs = root * A_.transpose();
  return (lhs - rhs).norm() <= tol * (1.0 + lhs.norm());
}

SemigroupSnapshot OuLevyModel::snapshot(double t) const {
  return semigroup_snapshot(A_, R_, a_, t);
}

OuLevyModel OuLevyModel::with_offset(Vector a) const { return OuLevyModel(A_, R_, std::move(a), jump_); }

OuLevyModel OuLevyModel::without_jumps() const { return OuLevyModel(A_, R_, a_); }

double HFunction::integral_of_inverse(double t) const {
  if (inverse_integral) return inverse_integral(t);
  return integrate([this](double s) { return 1.0 / h(s); }, 0.0, t);
}

double HFunction::integral_of_h(double t) const {
  if (integral) return integral(t);
  return integrate(h, 0.0, t);
}

HFunction HFunction::exponential(double rate) {
  HFunction fn;
  fn.name = "exp:" + std::to_string(rate);
  fn.h = [rate](double s) { return std::exp(rate * s); };
  if (rate == 0.0) {
    fn.inverse_integral = [](double t) { return t; };
    fn.integral = [](double t) { return t; };
  } else {
    // int_0^t e^{-rs} ds = -expm1(-rt)/r, int_0^t e^{rs} ds = expm1(rt)/r.
    fn.inverse_integral = [rate](double t) { return -std::expm1(-rate * t) / rate; };
    fn.integral = [rate](double t) { return std::expm1(rate * t) / rate; };
  }
  return fn;
}

HFunction HFunction::constant(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("HFunction::constant: value must be > 0");
  HFunction fn;
  fn.name = "const:" + std::to_string(value);
  fn.h = [value](double) { return value; };
  fn.inverse_integral = [value](double t) { return t / value; };
  fn.integral = [value](double t) { return t * value; };
  return fn;
}

HConditionReport verify_h_condition(const OuLevyModel& model, const HFunction& h,
                                    const std::vector<double>& times,
                                    const std::vector<Vector>& probes) {
  HConditionReport report;
  report.certified = true;
  const auto& root = model.noise_factor();
  const Matrix& R = model.noise_cov();
  for (double t : times) {
    const double ht = h.h(t);
    if (!(ht > 0.0)) {
      report.certified = false;
      report.worst_ratio = kInf;
      report.worst_time = t;
      report.note = "h is not positive at t=" + std::to_string(t);
      return report;
    }
    const Matrix T = model.propagator(t);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const Vector& x = probes[k];
      const double denom = std::sqrt(ht) * root.apply_sqrt(x).norm();
      const Vector image = T * (R * x);
      double ratio = 0.0;
      bool fails = false;
      if (!root.in_range(image, kRangeTol)) {
        ratio = kInf;
        fails = true;
      } else {
        const double num = root.apply_pinv_sqrt(image).norm();
        if (denom > 0.0) {
          ratio = num / denom;
        } else if (num > 1e-9) {
          ratio = kInf;
        }
        fails = num > denom + 1e-9;
      }
      if (ratio > report.worst_ratio || report.worst_probe < 0) {
        report.worst_ratio = ratio;
        report.worst_time = t;
        report.worst_probe = static_cast<int>(k);
      }
      if (fails) report.certified = false;
    }
  }
  report.note = "sampled certification over " + std::to_string(times.size()) + " times x " +
                std::to_string(probes.size()) + " probes";
  return report;
}

std::vector<Vector> default_probes(int dim, int extra, std::uint64_t seed) {
  std::vector<Vector> probes;
  for (int i = 0; i < dim; ++i) probes.push_back(Vector::Unit(dim, i));
  RngStream rng(seed, 0);
  for (int k = 0; k < extra; ++k) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    probes.push_back(v / v.norm());
  }
  return probes;
}

AssumptionAReport check_assumption_A_sufficient(const OuLevyModel& model) {
  AssumptionAReport report;
  report.abscissa = spectral_abscissa(model.drift());
  report.stable_drift = report.abscissa < 0.0;
  if (!model.has_jumps()) {
    report.jump_second_moment = true;
  } else {
    report.jump_second_moment = std::isfinite(model.jump()->second_moment());
  }
  report.trace_class_noise = model.noise_cov().allFinite();
  report.note =
      "sufficient conditions only; the limit-existence clause of the invariant-measure "
      "assumption is not verified literally";
  return report;
}

Vector invariant_mean(const OuLevyModel& model) {
  if (spectral_abscissa(model.drift()) >= 0.0) {
    throw std::domain_error("invariant_mean: unstable drift");
  }
  return -model.drift().partialPivLu().solve(model.drift_offset());
}

AdjointModel::AdjointModel(const OuLevyModel& model, Matrix R_inf, Vector m_inf)
    : A_(model.drift()),
      R_(model.noise_cov()),
      R_inf_(std::move(R_inf)),
      R_inf_inv_(R_inf_.inverse()),
      m_inf_(std::move(m_inf)),
      A_tilde_(R_inf_ * A_.transpose() * R_inf_inv_),
      model_(A_tilde_, R_, -(A_tilde_ * m_inf_)) {}

Matrix AdjointModel::T_tilde(double t) const {
  return R_inf_ * matrix_exponential(A_.transpose(), t) * R_inf_inv_;
}

Matrix AdjointModel::R_tilde(double t) const { return gramian(A_tilde_, R_, t); }

AdjointModel build_adjoint(const OuLevyModel& model, double rank_tol) {
  if (model.has_jumps()) {
    throw std::invalid_argument("build_adjoint: requires a jump-free model (M = 0)");
  }
  if (spectral_abscissa(model.drift()) >= 0.0) {
    throw std::domain_error("build_adjoint: unstable drift, no invariant measure");
  }
  Matrix R_inf = lyapunov_solve(model.drift(), model.noise_cov());
  const PsdFactorization factor(R_inf, rank_tol);
  if (!factor.full_rank()) {
    throw std::domain_error("build_adjoint: R_inf is singular, adjoint assumption fails in this truncation");
  }
  return AdjointModel(model, std::move(R_inf), invariant_mean(model));
}

GrowthReport check_growth(const OuLevyModel& model, const SemilinearSpec& spec,
                          const std::vector<Vector>& probes) {
  GrowthReport report;
  report.worst_excess = -kInf;
  const auto& root = model.noise_factor();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Vector value = spec.F(probes[k]);
    if (!root.in_range(value, kRangeTol)) {
      report.ok = false;
      report.in_range = false;
      report.worst_probe = static_cast<int>(k);
      report.note = "F(x) leaves the range of R^{1/2} at probe " + std::to_string(k);
      return report;
    }
    const double lhs = root.apply_pinv_sqrt(value).squaredNorm();
    const double excess = lhs - (spec.k1 + spec.k2 * probes[k].squaredNorm());
    if (excess > report.worst_excess) {
      report.worst_excess = excess;
      report.worst_probe = static_cast<int>(k);
    }
    if (excess > 1e-9) report.ok = false;
  }
  report.note = "range membership spot-checked on probes only";
  return report;
}

}  // namespace harnack
