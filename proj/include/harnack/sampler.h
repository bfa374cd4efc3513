#pragma once

// Exact simulation of the OU-Levy model: one-shot endpoint draws from the
// Mehler representation, grid paths of the stochastic convolution W_A with
// the matching Brownian increments, Girsanov weights, the coupled pair used
// for the Harnack argument, and the Girsanov construction of the semilinear
// "semigroup" P_t^F.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "harnack/control.h"
#include "harnack/kernels.h"
#include "harnack/model.h"
#include "harnack/rng.h"

namespace harnack {

using TestFunction = std::function<double(const Vector&)>;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Mean and sample-stdev / sqrt(n), folded in index order.
McEstimate summarize(std::span<const double> values, std::uint64_t seed);

/// Sample variance (n - 1 denominator) and the standard error of that
/// variance estimate, sqrt((m4 - s^4) / n).
struct VarianceEstimate {
  double variance = 0.0;
  double std_error = 0.0;
};
VarianceEstimate sample_variance(std::span<const double> values);

/// Draws X_t^x = T_t x + m_t + G + J exactly: G ~ N(0, R_t) through the R_t
/// factor and J = sum_{i <= N} T_{V_i} xi_i with N ~ Poisson(rate t) and
/// V_i ~ Uniform(0, t).
class EndpointSampler {
 public:
  EndpointSampler(const OuLevyModel& model, double t);

  const SemigroupSnapshot& snapshot() const { return snap_; }
  double time() const { return snap_.t; }

  /// m_t + G + J: everything except the T_t x term.
  Vector noise(RngStream& rng) const;
  Vector sample(const Vector& x, RngStream& rng) const { return snap_.T * x + noise(rng); }
  /// J alone (zero vector for jump-free models).
  Vector jump_part(RngStream& rng) const;

 private:
  Matrix jump_transport(double s) const;

  const OuLevyModel* model_;
  SemigroupSnapshot snap_;
  bool diagonal_drift_ = false;
};

Vector sample_ou_endpoint(const OuLevyModel& model, double t, const Vector& x, RngStream& rng);

/// P_t f(x) by n exact endpoint draws on streams (seed, 0..n-1). Throws
/// std::domain_error on a non-finite f value and std::invalid_argument for n < 100.
McEstimate estimate_semigroup(const OuLevyModel& model, double t, const Vector& x,
                              const TestFunction& f, std::int64_t n, std::uint64_t seed,
                              ExecPolicy policy = ExecPolicy::kParallel);

/// Per-replicate values of every fns[j] at every start point with the noise
/// of replicate i shared across start points (common random numbers).
/// Result is indexed [s * fns.size() + j][i].
std::vector<std::vector<double>> sample_functionals(const OuLevyModel& model, double t,
                                                    const std::vector<Vector>& starts,
                                                    const std::vector<TestFunction>& fns,
                                                    std::int64_t n, std::uint64_t seed,
                                                    ExecPolicy policy = ExecPolicy::kParallel);

/// Stochastic convolution W_A on a grid together with the Brownian
/// increments that drive it.
struct WaPath {
  std::vector<Vector> states;      // W_A(t_k), k = 0..K
  std::vector<Vector> increments;  // W(t_{k+1}) - W(t_k), k = 0..K-1
};

/// Exact conditional recursion W_A(t_{k+1}) = T_delta W_A(t_k) + eta_k where
/// (dW_k, eta_k) is drawn jointly: Var dW = delta I, Var eta = R_delta,
/// Cov(eta, dW) = int_0^delta T_r dr R^{1/2}.
class WaPathSampler {
 public:
  WaPathSampler(const OuLevyModel& model, std::vector<double> grid);

  const std::vector<double>& grid() const { return grid_; }
  int steps() const { return static_cast<int>(grid_.size()) - 1; }
  WaPath sample(RngStream& rng) const;
  /// Single step from `state`, writing the new state and the increment.
  void step(int k, RngStream& rng, Vector& state, Vector& increment) const;

 private:
  struct StepKernel {
    double delta = 0.0;
    Matrix T;
    Matrix joint_factor;  // 2d x rank, rows [dW; eta]
  };
  std::vector<double> grid_;
  std::vector<StepKernel> kernels_;
  std::vector<int> kernel_of_step_;
  int dim_ = 0;
};

WaPath wa_path(const OuLevyModel& model, const std::vector<double>& grid, RngStream& rng);

std::vector<double> uniform_time_grid(double t, int K);

struct GirsanovWeight {
  double log_rho = 0.0;
  double integral_psi_sq = 0.0;
  double rho() const;
};

/// log rho = sum <u_k, dW_k> - 1/2 sum ||u_k||^2 delta_k (left-point rule).
/// `controls` needs at least K entries; entry K, if present, is ignored.
GirsanovWeight girsanov_weight(const OuLevyModel& model, const std::vector<double>& grid,
                               const std::vector<Vector>& increments,
                               const std::vector<Vector>& controls);

struct CoupledSample {
  Vector endpoint;          // Y_t^y
  Vector shifted_endpoint;  // X_t^x re-integrated from x with the shifted noise
  GirsanovWeight weight;
};

/// Couples Y^y with X^x through the Girsanov shift psi = R^{1/2} u for the
/// sample-and-hold null control u steering y - x to 0 on the K-grid. Under
/// rho dP, X^x has the law of the process started at x and X_t^x = Y_t^y.
class CoupledPairSampler {
 public:
  CoupledPairSampler(const OuLevyModel& model, double t, Vector x, Vector y, int K);

  const NullControl& control() const { return control_; }
  CoupledSample sample(RngStream& rng) const;

 private:
  const OuLevyModel* model_;
  double t_;
  Vector x_;
  Vector y_;
  NullControl control_;
  WaPathSampler paths_;
  EndpointSampler jumps_;
  Matrix step_T_;
  Vector step_offset_;
  Matrix input_;
};

CoupledSample sample_coupled_pair(const OuLevyModel& model, double t, const Vector& x,
                                  const Vector& y, int K, RngStream& rng);

/// One replicate of the semilinear construction.
struct SemilinearSample {
  double log_rho = 0.0;
  double f_value = 0.0;
  double wa_energy = 0.0;  // int_0^t ||W_A(s)||^2 ds, trapezoid on the grid
};

/// Per replicate: W_A on the K-grid, psi_k = R^{-1/2} F(W_A(t_k) + T_{t_k} x + m_{t_k}),
/// rho accumulated in log domain, f evaluated at W_A(t) + T_t x + m_t.
/// Throws std::domain_error when F leaves the range of R^{1/2} on a visited state.
std::vector<SemilinearSample> semilinear_replicates(const OuLevyModel& model,
                                                    const SemilinearSpec& spec, double t,
                                                    const Vector& x, const TestFunction& f,
                                                    std::int64_t n, int K, std::uint64_t seed,
                                                    ExecPolicy policy = ExecPolicy::kParallel);

struct SemilinearEstimate {
  McEstimate value;      // E[rho f(X~_t)]
  McEstimate rho;        // E[rho], the martingale diagnostic
  int grid_steps = 0;    // K actually used
};

/// P_t^F f(x) = E[rho_t^x f(X~_t^x)]. When E rho drifts more than 3 sigma
/// from 1 the grid is doubled once.
SemilinearEstimate semilinear_estimate_detailed(const OuLevyModel& model,
                                                const SemilinearSpec& spec, double t,
                                                const Vector& x, const TestFunction& f,
                                                std::int64_t n, int K, std::uint64_t seed,
                                                ExecPolicy policy = ExecPolicy::kParallel);

McEstimate semilinear_estimate(const OuLevyModel& model, const SemilinearSpec& spec, double t,
                               const Vector& x, const TestFunction& f, std::int64_t n, int K,
                               std::uint64_t seed, ExecPolicy policy = ExecPolicy::kParallel);

/// E exp(lambda int_0^t ||W_A(s)||^2 ds) by Monte Carlo on the K-grid.
McEstimate exp_functional_estimate(const OuLevyModel& model, double t, double lambda,
                                   std::int64_t n, int K, std::uint64_t seed,
                                   ExecPolicy policy = ExecPolicy::kParallel);

/// theta = Tr R_1, C0 = sup_{s <= 1} E exp(||W_A(s)||^2 / (4 theta)) in closed
/// form det(I - R_s / (2 theta))^{-1/2}, and the horizon on which
/// E exp(lambda int ||W_A||^2) <= C0^{4 theta lambda t} is guaranteed.
struct ExpMomentConstants {
  double theta = 0.0;
  double c0 = 1.0;
  double horizon(double lambda) const;
  /// C0^{4 theta lambda t}.
  double bound(double lambda, double t) const;
};
ExpMomentConstants exp_moment_constants(const OuLevyModel& model);

/// E exp(||W_A(s)||^2 / (4 theta)) by Monte Carlo at a single time s.
McEstimate wa_square_mgf_estimate(const OuLevyModel& model, double s, double scale,
                                  std::int64_t n, std::uint64_t seed,
                                  ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace harnack
