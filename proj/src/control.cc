#include "harnack/control.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

#include "harnack/quadrature.h"

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_grid(double t, int K) {
  std::vector<double> grid(K + 1);
  for (int k = 0; k <= K; ++k) grid[k] = t * static_cast<double>(k) / K;
  grid[K] = t;
  return grid;
}

void require_grid(double t, int K, const char* who) {
  if (!(t > 0.0)) throw std::invalid_argument(std::string(who) + ": t must be > 0");
  if (K < 1) throw std::invalid_argument(std::string(who) + ": K must be >= 1");
}

NullControl infeasible(std::vector<double> grid, std::string note) {
  NullControl control;
  control.grid = std::move(grid);
  control.feasible = false;
  control.energy = kInf;
  control.terminal_residual = kInf;
  control.note = std::move(note);
  return control;
}

// ||R^{-1/2} T_s x0||^2 with a closed form for diagonal drift.
std::function<double(double)> weighted_norm_integrand(const OuLevyModel& model, const Vector& x0) {
  const auto& root = model.noise_factor();
  if (model.drift_is_diagonal()) {
    const Vector diag = model.drift().diagonal();
    return [&root, diag, x0](double s) {
      const Vector Tx = (diag.array() * s).exp().matrix().cwiseProduct(x0);
      return root.apply_pinv_sqrt(Tx).squaredNorm();
    };
  }
  const Matrix A = model.drift();
  return [&root, A, x0](double s) {
    return root.apply_pinv_sqrt(matrix_exponential(A, s) * x0).squaredNorm();
  };
}

}  // namespace

GammaNorm gamma_norm(const SemigroupSnapshot& snap, const Vector& x) {
  const Vector Tx = snap.T * x;
  GammaNorm out;
  out.residual = snap.gramian_factor.range_residual(Tx);
  if (out.residual > snap.gramian_factor.rank_tol()) {
    out.in_domain = false;
    out.value = kInf;
    return out;
  }
  out.value = snap.gramian_factor.apply_pinv_sqrt(Tx).norm();
  return out;
}

GammaNorm gamma_norm(const OuLevyModel& model, double t, const Vector& x) {
  return gamma_norm(model.snapshot(t), x);
}

GammaOperatorNorm gamma_operator_norm(const SemigroupSnapshot& snap) {
  const auto& factor = snap.gramian_factor;
  GammaOperatorNorm out;
  const Matrix leak = snap.T - factor.range_projector() * snap.T;
  if (leak.norm() > factor.rank_tol() * std::max(1.0, snap.T.norm())) {
    out.bounded = false;
    out.value = kInf;
    out.second_value = kInf;
    return out;
  }
  const Matrix gamma = factor.pinv_sqrt() * snap.T;
  Eigen::JacobiSVD<Matrix> svd(gamma, Eigen::ComputeFullV);
  out.value = svd.singularValues()(0);
  out.second_value = svd.singularValues().size() > 1 ? svd.singularValues()(1) : out.value;
  out.top_direction = svd.matrixV().col(0);
  return out;
}

GammaOperatorNorm gamma_operator_norm(const OuLevyModel& model, double t) {
  return gamma_operator_norm(model.snapshot(t));
}

NullControl min_energy_control(const OuLevyModel& model, double t, const Vector& x0, int K) {
  require_grid(t, K, "min_energy_control");
  const SemigroupSnapshot snap = model.snapshot(t);
  auto grid = uniform_grid(t, K);
  const GammaNorm g = gamma_norm(snap, x0);
  if (!g.in_domain) return infeasible(std::move(grid), "x0 outside the domain of Gamma_t");

  const double delta = t / K;
  const Matrix& A = model.drift();
  const Matrix root = model.noise_factor().sqrt();
  const Vector z = snap.gramian_factor.apply_pinv(snap.T * x0);
  const Matrix step_T = matrix_exponential(A.transpose(), delta);
  const Matrix half_T = matrix_exponential(A.transpose(), 0.5 * delta);

  NullControl control;
  control.grid = std::move(grid);
  control.values.assign(K + 1, Vector());
  control.midpoints.assign(K, Vector());
  // w_k = T_{t - t_k}^T z, built backwards from w_K = z.
  Vector w = z;
  control.values[K] = -(root * w);
  for (int k = K - 1; k >= 0; --k) {
    control.midpoints[k] = -(root * (half_T * w));
    w = step_T * w;
    control.values[k] = -(root * w);
  }
  double energy = 0.5 * (control.values.front().squaredNorm() + control.values.back().squaredNorm());
  for (int k = 1; k < K; ++k) energy += control.values[k].squaredNorm();
  control.energy = energy * delta;
  control.terminal_residual = steer_residual(model, x0, control);
  control.note = "minimum-energy control; energy by trapezoid rule";
  return control;
}

NullControl weighted_control(const OuLevyModel& model, double t, const Vector& x0,
                             const std::function<double(double)>& xi, int K) {
  require_grid(t, K, "weighted_control");
  auto grid = uniform_grid(t, K);
  const double delta = t / K;
  for (double s : grid) {
    if (!(xi(s) > 0.0)) throw std::invalid_argument("weighted_control: xi must be strictly positive");
  }
  for (int k = 0; k < K; ++k) {
    if (!(xi(grid[k] + 0.5 * delta) > 0.0)) {
      throw std::invalid_argument("weighted_control: xi must be strictly positive");
    }
  }

  const auto& root = model.noise_factor();
  const Matrix& A = model.drift();
  const Matrix step_T = matrix_exponential(A, delta);
  const Matrix half_T = matrix_exponential(A, 0.5 * delta);

  // States T_s x0 on the grid; each must lie in R^{1/2}H.
  std::vector<Vector> states(K + 1);
  std::vector<Vector> mid_states(K);
  states[0] = x0;
  for (int k = 0; k < K; ++k) {
    mid_states[k] = half_T * states[k];
    states[k + 1] = step_T * states[k];
  }
  for (const auto& s : states) {
    if (!root.in_range(s, 1e-9)) return infeasible(std::move(grid), "T_s x0 leaves the range of R^{1/2}");
  }

  const double xi_total = integrate(xi, 0.0, t);
  NullControl control;
  control.grid = grid;
  control.values.resize(K + 1);
  control.midpoints.resize(K);
  for (int k = 0; k <= K; ++k) control.values[k] = -(xi(grid[k]) / xi_total) * root.apply_pinv_sqrt(states[k]);
  for (int k = 0; k < K; ++k) {
    control.midpoints[k] = -(xi(grid[k] + 0.5 * delta) / xi_total) * root.apply_pinv_sqrt(mid_states[k]);
  }

  const auto norm_sq = weighted_norm_integrand(model, x0);
  const double numerator = integrate([&](double s) { return xi(s) * xi(s) * norm_sq(s); }, 0.0, t);
  control.energy = numerator / (xi_total * xi_total);
  control.terminal_residual = steer_residual(model, x0, control);
  control.note = "xi-weighted null control; energy by adaptive quadrature";
  return control;
}

NullControl sample_and_hold_control(const OuLevyModel& model, double t, const Vector& x0, int K) {
  require_grid(t, K, "sample_and_hold_control");
  auto grid = uniform_grid(t, K);
  const double delta = t / K;
  const int d = model.dim();
  const Matrix& A = model.drift();
  const Matrix step_T = matrix_exponential(A, delta);
  const Matrix input = integrated_exponential(A, delta) * model.noise_factor().sqrt();

  // Phi_k = T_{t - t_{k+1}} B, so that x_K = T_t x0 + sum_k Phi_k u_k.
  std::vector<Matrix> phi(K);
  phi[K - 1] = input;
  for (int k = K - 2; k >= 0; --k) phi[k] = step_T * phi[k + 1];
  Matrix reach = Matrix::Zero(d, d);
  for (const auto& p : phi) reach.noalias() += p * p.transpose();
  reach /= delta;
  const PsdFactorization reach_factor(0.5 * (reach + reach.transpose()));

  const Vector target = matrix_exponential(A, t) * x0;
  if (!reach_factor.in_range(target, reach_factor.rank_tol())) {
    return infeasible(std::move(grid), "T_t x0 is not reachable by the sampled system");
  }
  const Vector z = reach_factor.apply_pinv(target);

  NullControl control;
  control.grid = std::move(grid);
  control.piecewise_constant = true;
  control.values.resize(K + 1);
  double energy = 0.0;
  for (int k = 0; k < K; ++k) {
    control.values[k] = -(phi[k].transpose() * z) / delta;
    energy += control.values[k].squaredNorm() * delta;
  }
  control.values[K] = control.values[K - 1];
  control.energy = energy;
  control.terminal_residual = steer_residual(model, x0, control);
  control.note = "sample-and-hold minimum-energy control of the sampled system";
  return control;
}

double steer_residual(const OuLevyModel& model, const Vector& x0, const NullControl& control) {
  if (!control.feasible) return kInf;
  const int K = static_cast<int>(control.grid.size()) - 1;
  const Matrix& A = model.drift();
  const Matrix root = model.noise_factor().sqrt();
  Vector x = x0;
  if (control.piecewise_constant) {
    // Grids are uniform, so one cell propagator serves every step.
    const double delta = control.step();
    const Matrix step_T = matrix_exponential(A, delta);
    const Matrix input = integrated_exponential(A, delta) * root;
    for (int k = 0; k < K; ++k) x = step_T * x + input * control.values[k];
    return x.norm();
  }
  for (int k = 0; k < K; ++k) {
    const double h = control.grid[k + 1] - control.grid[k];
    const Vector b0 = root * control.values[k];
    const Vector bm = root * control.midpoints[k];
    const Vector b1 = root * control.values[k + 1];
    const Vector k1 = A * x + b0;
    const Vector k2 = A * (x + 0.5 * h * k1) + bm;
    const Vector k3 = A * (x + 0.5 * h * k2) + bm;
    const Vector k4 = A * (x + h * k3) + b1;
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x.norm();
}

double h_bound(const OuLevyModel& model, const HFunction& h, double t, const Vector& x) {
  if (!(t > 0.0)) throw std::invalid_argument("h_bound: t must be > 0");
  const auto& root = model.noise_factor();
  if (!root.in_range(x, root.rank_tol())) return kInf;
  return root.apply_pinv_sqrt(x).squaredNorm() / h.integral_of_inverse(t);
}

}  // namespace harnack
