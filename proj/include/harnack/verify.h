#pragma once

// Executable inequality checks. Each check returns lhs, rhs, their standard
// errors and a verdict; exact (closed-form) sides carry zero standard error.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "harnack/analytic.h"
#include "harnack/control.h"
#include "harnack/model.h"
#include "harnack/sampler.h"

namespace harnack {

enum class Verdict { kHolds, kHoldsEquality, kViolated, kTrivialInfiniteRhs, kInconclusive };

const char* to_string(Verdict v);
/// HOLDS, HOLDS_EQUALITY or TRIVIAL_INFINITE_RHS.
bool verdict_holds(Verdict v);

/// rhs = inf -> TRIVIAL_INFINITE_RHS; with sigma = sqrt(lhs_se^2 + rhs_se^2):
/// |margin| <= max(1e-9 max(1, |lhs|, |rhs|), sigma) -> HOLDS_EQUALITY;
/// margin > 0 -> HOLDS; lhs - rhs > 3 sigma -> VIOLATED; else INCONCLUSIVE.
Verdict classify(double lhs, double rhs, double lhs_se, double rhs_se);

struct CheckReport {
  std::string check_id;
  std::string type;
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string note;
};

/// Fills margin and verdict from the four numbers.
CheckReport make_report(std::string check_id, std::string type, double lhs, double rhs,
                        double lhs_se, double rhs_se, std::uint64_t seed);

/// A test function with an optional exact exponential form f = exp<c, .>.
struct TestFunctionSpec {
  std::string name;
  TestFunction f;
  std::optional<Vector> exp_coeff;
};

struct McOptions {
  std::int64_t n = 100000;
  int K = 512;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::kParallel;
};

enum class BoundMode { kExactGamma, kOperatorNorm, kHFunction };
const char* to_string(BoundMode m);
BoundMode parse_bound_mode(const std::string& s);

struct HarnackOptions {
  BoundMode mode = BoundMode::kExactGamma;
  std::optional<HFunction> h;           // required for kHFunction
  std::optional<double> control_energy; // replaces ||Gamma_t(x - y)||^2 in kExactGamma
  bool allow_closed_form = true;
};

/// (P_t f(x))^alpha <= exp(alpha E / (2(alpha - 1))) P_t f^alpha(y).
CheckReport check_harnack(const OuLevyModel& model, double t, const Vector& x, const Vector& y,
                          double alpha, const TestFunctionSpec& f, const HarnackOptions& opts,
                          const McOptions& mc);

/// P_t log f(x) <= log P_t f(y) + 1/2 ||Gamma_t||^2 ||x - y||^2 with f clamped to >= 1.
CheckReport check_log_harnack(const OuLevyModel& model, double t, const Vector& x, const Vector& y,
                              const TestFunctionSpec& f, const McOptions& mc);

/// |P_t f(x) - P_t f(y)|^2 <= (e^{||Gamma_t(x - y)||^2} - 1) min(Var_x, Var_y).
CheckReport check_gradient_estimate(const OuLevyModel& model, double t, const Vector& x,
                                    const Vector& y, const TestFunctionSpec& f, const McOptions& mc);

/// First: the alpha-kernel integral against exp(alpha ||Gamma_t||^2 ||x - y||^2 / (2(alpha - 1)^2)).
/// Second: the kernel KL against 1/2 ||Gamma_t||^2 ||x - y||^2.
std::pair<CheckReport, CheckReport> check_kernel_inequalities(const OuLevyModel& model, double t,
                                                              const Vector& x, const Vector& y,
                                                              double alpha);

/// First: KL(adjoint pushforward of nu || mu) vs 1/2 ||Gamma~_t||^2 W2(nu, mu)^2.
/// Second: KL(pushforward of nu || mu) vs 1/2 ||Gamma_t||^2 W2(nu, mu)^2.
std::pair<CheckReport, CheckReport> check_entropy_cost(const OuLevyModel& model,
                                                       const GaussianMeasure& nu, double t);

/// First: KL(nu || mu) vs 2 I(nu) int_0^t h + 1/2 ||Gamma~_t||^2 W2^2.
/// Second (symmetric form): the transport term is replaced by
/// 1/2 ||R^{-1/2}||^2 W2^2 / int_0^t h^{-1}; only emitted for symmetric models.
std::pair<CheckReport, std::optional<CheckReport>> check_hwi(const OuLevyModel& model,
                                                             const GaussianMeasure& nu,
                                                             const HFunction& h, double t);

struct SemilinearHarnackTerms {
  double c_p = 1.0;        // C_{p/(p-1), k2}(t)
  double c_q = 1.0;        // C_{1/(q-1), k2}(t)
  double exponent = 0.0;   // the exp(...) argument
  bool admissible = true;  // t inside the exponential-moment horizon
};

/// (P_t^F f)^alpha(x) vs the product bound with C constants by Monte Carlo.
CheckReport check_semilinear_harnack(const OuLevyModel& model, const SemilinearSpec& spec, double t,
                                     const Vector& x, const Vector& y, double alpha, double p,
                                     double q, const TestFunctionSpec& f, const McOptions& mc,
                                     SemilinearHarnackTerms* terms = nullptr);

/// E rho^p and E rho^{-delta} against their exponential-moment bounds.
std::pair<CheckReport, CheckReport> check_rho_moments(const OuLevyModel& model,
                                                      const SemilinearSpec& spec, double t,
                                                      const Vector& x, double p, double delta,
                                                      const McOptions& mc);

/// ||p_t(x, .)||_{L^{alpha/(alpha-1)}(mu)} vs the Gaussian-integral bound.
CheckReport check_density_norm(const OuLevyModel& model, double t, const Vector& x, double alpha);

/// lhs = 1, rhs = C(t, alpha, eps) (finite iff the hyper-bound applies).
CheckReport check_hyper_constant(const OuLevyModel& model, double t, double alpha, double eps);

/// lhs = worst sampled ratio ||R^{-1/2} T_s R x|| / (sqrt(h(s)) ||R^{1/2} x||), rhs = 1.
CheckReport check_h_condition(const OuLevyModel& model, const HFunction& h, double t);

/// 1/2 ||Gamma_t||^2 ||x - y||^2 with the conventions inf * 0 = 0.
double log_harnack_cost(const GammaOperatorNorm& g, const Vector& x, const Vector& y);

}  // namespace harnack
