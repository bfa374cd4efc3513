#include "harnack/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "harnack/quadrature.h"

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEqualityTol = 1e-9;

// Sub-stream tags so that the two sides of a check never share draws
// unless common random numbers are intended.
constexpr std::uint64_t kTagLhs = 1;
constexpr std::uint64_t kTagRhs = 2;
constexpr std::uint64_t kTagConstP = 3;
constexpr std::uint64_t kTagConstQ = 4;

nlohmann::json to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::vector<double> time_probe_grid(double t, int count = 64) {
  std::vector<double> times;
  for (int j = 1; j <= count; ++j) times.push_back(t * static_cast<double>(j) / count);
  return times;
}

void append_note(CheckReport& r, const std::string& note) {
  if (note.empty()) return;
  if (!r.note.empty()) r.note += "; ";
  r.note += note;
}

// A violated verdict whose hypothesis could not be certified is not a
// counterexample to anything.
void downgrade_unverified(CheckReport& r, const std::string& why) {
  append_note(r, why);
  if (r.verdict == Verdict::kViolated) r.verdict = Verdict::kInconclusive;
}

double power_se(double mean, double se, double alpha) {
  if (se == 0.0) return 0.0;
  return alpha * std::pow(std::abs(mean), alpha - 1.0) * se;
}

TestFunction nonnegative(const TestFunctionSpec& spec) {
  return [f = spec.f, name = spec.name](const Vector& z) {
    const double v = f(z);
    if (v < 0.0) throw std::invalid_argument("test function '" + name + "' returned a negative value");
    return v;
  };
}

double operator_cost(const GammaOperatorNorm& g, const Vector& x, const Vector& y) {
  const double dist = (x - y).norm();
  if (dist == 0.0) return 0.0;
  if (!g.bounded) return kInf;
  return g.value * g.value * dist * dist;
}

// int_0^t ||T_s x + m_s||^2 ds via the augmented generator [[A, a], [0, 0]].
double mean_path_energy(const OuLevyModel& model, double t, const Vector& x) {
  const int d = model.dim();
  if (x.isZero(0.0) && model.drift_offset().isZero(0.0)) return 0.0;
  Matrix aug = Matrix::Zero(d + 1, d + 1);
  aug.topLeftCorner(d, d) = model.drift();
  aug.topRightCorner(d, 1) = model.drift_offset();
  Vector start(d + 1);
  start << x, 1.0;
  if (model.drift().isZero(0.0) && model.drift_offset().isZero(0.0)) return x.squaredNorm() * t;
  return integrate([&](double s) { return (matrix_exponential(aug, s) * start).head(d).squaredNorm(); },
                   0.0, t);
}

// Growth condition spot check on the default probes at three scales.
GrowthReport growth_on_probes(const OuLevyModel& model, const SemilinearSpec& spec) {
  std::vector<Vector> probes;
  for (const auto& p : default_probes(model.dim())) {
    for (double scale : {0.5, 3.0, 20.0}) probes.push_back(scale * p);
  }
  probes.push_back(Vector::Zero(model.dim()));
  return check_growth(model, spec, probes);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "HOLDS";
    case Verdict::kHoldsEquality: return "HOLDS_EQUALITY";
    case Verdict::kViolated: return "VIOLATED";
    case Verdict::kTrivialInfiniteRhs: return "TRIVIAL_INFINITE_RHS";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

bool verdict_holds(Verdict v) {
  return v == Verdict::kHolds || v == Verdict::kHoldsEquality || v == Verdict::kTrivialInfiniteRhs;
}

Verdict classify(double lhs, double rhs, double lhs_se, double rhs_se) {
  if (std::isnan(lhs) || std::isnan(rhs)) return Verdict::kInconclusive;
  if (rhs == kInf) return Verdict::kTrivialInfiniteRhs;
  if (lhs == kInf) return Verdict::kViolated;
  const double sigma = std::hypot(lhs_se, rhs_se);
  const double margin = rhs - lhs;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  if (std::abs(margin) <= std::max(kEqualityTol * scale, sigma)) return Verdict::kHoldsEquality;
  if (margin > 0.0) return Verdict::kHolds;
  if (-margin > 3.0 * sigma) return Verdict::kViolated;
  return Verdict::kInconclusive;
}

CheckReport make_report(std::string check_id, std::string type, double lhs, double rhs,
                        double lhs_se, double rhs_se, std::uint64_t seed) {
  CheckReport r;
  r.check_id = std::move(check_id);
  r.type = std::move(type);
  r.lhs = lhs;
  r.rhs = rhs;
  r.lhs_se = lhs_se;
  r.rhs_se = rhs_se;
  r.margin = rhs == kInf ? kInf : rhs - lhs;
  r.verdict = classify(lhs, rhs, lhs_se, rhs_se);
  r.seed = seed;
  return r;
}

const char* to_string(BoundMode m) {
  switch (m) {
    case BoundMode::kExactGamma: return "exact_gamma";
    case BoundMode::kOperatorNorm: return "operator_norm";
    case BoundMode::kHFunction: return "h_function";
  }
  return "exact_gamma";
}

BoundMode parse_bound_mode(const std::string& s) {
  if (s == "exact_gamma") return BoundMode::kExactGamma;
  if (s == "operator_norm") return BoundMode::kOperatorNorm;
  if (s == "h_function") return BoundMode::kHFunction;
  throw std::invalid_argument("unknown bound_mode '" + s + "'");
}

double log_harnack_cost(const GammaOperatorNorm& g, const Vector& x, const Vector& y) {
  return 0.5 * operator_cost(g, x, y);
}

// --- Harnack ------------------------------------------------------------------

CheckReport check_harnack(const OuLevyModel& model, double t, const Vector& x, const Vector& y,
                          double alpha, const TestFunctionSpec& f, const HarnackOptions& opts,
                          const McOptions& mc) {
  if (!(alpha > 1.0)) throw std::invalid_argument("check_harnack: alpha must be > 1");
  if (!(t > 0.0)) throw std::invalid_argument("check_harnack: t must be > 0");
  const SemigroupSnapshot snap = model.snapshot(t);
  const Vector diff = x - y;

  double cost = 0.0;
  std::string note;
  bool hypothesis_ok = true;
  switch (opts.mode) {
    case BoundMode::kExactGamma:
      if (opts.control_energy) {
        cost = *opts.control_energy;
        note = "control energy replaces ||Gamma_t(x-y)||^2";
      } else {
        const GammaNorm g = gamma_norm(snap, diff);
        cost = g.in_domain ? g.value * g.value : kInf;
      }
      break;
    case BoundMode::kOperatorNorm:
      cost = operator_cost(gamma_operator_norm(snap), x, y);
      break;
    case BoundMode::kHFunction: {
      if (!opts.h) throw std::invalid_argument("check_harnack: h_function mode needs an h");
      cost = h_bound(model, *opts.h, t, diff);
      const HConditionReport cert =
          verify_h_condition(model, *opts.h, time_probe_grid(t), default_probes(model.dim()));
      hypothesis_ok = cert.certified;
      note = cert.certified ? "h certified on sampled grid" : "h NOT certified: " + cert.note;
      break;
    }
  }
  const double kappa = cost == kInf ? kInf : alpha * cost / (2.0 * (alpha - 1.0));

  const bool closed_form = opts.allow_closed_form && f.exp_coeff &&
                           (!model.has_jumps() || model.jump()->has_exp_moment());
  CheckReport r;
  if (closed_form) {
    const Vector& c = *f.exp_coeff;
    const double log_lhs = alpha * mehler_log_exponential(model, t, c, x);
    const double log_rhs =
        kappa == kInf ? kInf : kappa + mehler_log_exponential(model, t, Vector(alpha * c), y);
    r = make_report("", "harnack", std::exp(log_lhs), std::exp(log_rhs), 0.0, 0.0, mc.seed);
    append_note(r, "closed form (Mehler)");
  } else {
    const TestFunction fx = nonnegative(f);
    const TestFunction fy = [fx, alpha](const Vector& z) { return std::pow(fx(z), alpha); };
    const auto lhs_vals = sample_functionals(model, t, {x}, {fx}, mc.n, mix_seed(mc.seed, kTagLhs), mc.policy);
    const auto rhs_vals = sample_functionals(model, t, {y}, {fy}, mc.n, mix_seed(mc.seed, kTagRhs), mc.policy);
    const McEstimate px = summarize(lhs_vals.front(), mc.seed);
    const McEstimate py = summarize(rhs_vals.front(), mc.seed);
    const double lhs = std::pow(px.mean, alpha);
    const double lhs_se = power_se(px.mean, px.std_error, alpha);
    double rhs = kInf, rhs_se = 0.0;
    if (kappa != kInf) {
      const double factor = std::exp(kappa);
      rhs = factor * py.mean;
      rhs_se = factor * py.std_error;
    }
    r = make_report("", "harnack", lhs, rhs, lhs_se, rhs_se, mc.seed);
    append_note(r, "Monte Carlo, independent streams");
  }
  append_note(r, note);
  if (!hypothesis_ok) downgrade_unverified(r, "hypothesis not certified");
  r.params = {{"t", t}, {"x", to_json(x)}, {"y", to_json(y)}, {"alpha", alpha},
              {"f", f.name}, {"bound_mode", to_string(opts.mode)}, {"n", mc.n}};
  if (opts.h) r.params["h"] = opts.h->name;
  return r;
}

CheckReport check_log_harnack(const OuLevyModel& model, double t, const Vector& x, const Vector& y,
                              const TestFunctionSpec& f, const McOptions& mc) {
  const GammaOperatorNorm g = gamma_operator_norm(model, t);
  const double cost = log_harnack_cost(g, x, y);
  const auto vals = sample_functionals(model, t, {x, y}, {f.f}, mc.n, mix_seed(mc.seed, kTagLhs), mc.policy);
  std::int64_t clamped = 0;
  std::vector<double> logs(mc.n), clipped(mc.n);
  for (std::int64_t i = 0; i < mc.n; ++i) {
    const double vx = vals[0][i];
    const double vy = vals[1][i];
    if (vx < 1.0) ++clamped;
    if (vy < 1.0) ++clamped;
    logs[i] = std::log(std::max(vx, 1.0));
    clipped[i] = std::max(vy, 1.0);
  }
  const McEstimate lhs = summarize(logs, mc.seed);
  const McEstimate py = summarize(clipped, mc.seed);
  double rhs = kInf, rhs_se = 0.0;
  if (cost != kInf) {
    rhs = std::log(py.mean) + cost;
    rhs_se = py.std_error / py.mean;
  }
  CheckReport r = make_report("", "log_harnack", lhs.mean, rhs, lhs.std_error, rhs_se, mc.seed);
  append_note(r, "Monte Carlo, common random numbers for x and y");
  if (clamped > 0) append_note(r, "f clamped to max(f,1) on " + std::to_string(clamped) + " samples");
  r.params = {{"t", t}, {"x", to_json(x)}, {"y", to_json(y)}, {"f", f.name}, {"n", mc.n}};
  return r;
}

CheckReport check_gradient_estimate(const OuLevyModel& model, double t, const Vector& x,
                                    const Vector& y, const TestFunctionSpec& f, const McOptions& mc) {
  const GammaNorm g = gamma_norm(model, t, x - y);
  const auto vals = sample_functionals(model, t, {x, y}, {f.f}, mc.n, mix_seed(mc.seed, kTagLhs), mc.policy);
  std::vector<double> diff(mc.n);
  for (std::int64_t i = 0; i < mc.n; ++i) diff[i] = vals[0][i] - vals[1][i];
  const McEstimate d = summarize(diff, mc.seed);
  const double lhs = d.mean * d.mean;
  const double lhs_se = 2.0 * std::abs(d.mean) * d.std_error + d.std_error * d.std_error;
  const VarianceEstimate vx = sample_variance(vals[0]);
  const VarianceEstimate vy = sample_variance(vals[1]);
  const VarianceEstimate& vmin = vx.variance <= vy.variance ? vx : vy;
  double rhs = kInf, rhs_se = 0.0;
  if (g.in_domain) {
    const double factor = std::expm1(g.value * g.value);
    rhs = factor * vmin.variance;
    rhs_se = factor * vmin.std_error;
  }
  CheckReport r = make_report("", "gradient", lhs, rhs, lhs_se, rhs_se, mc.seed);
  append_note(r, "Monte Carlo, common random numbers for x and y");
  r.params = {{"t", t}, {"x", to_json(x)}, {"y", to_json(y)}, {"f", f.name}, {"n", mc.n}};
  return r;
}

// --- kernels ------------------------------------------------------------------

std::pair<CheckReport, CheckReport> check_kernel_inequalities(const OuLevyModel& model, double t,
                                                              const Vector& x, const Vector& y,
                                                              double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("check_kernel_inequalities: alpha must be > 1");
  const GammaOperatorNorm g = gamma_operator_norm(model, t);
  const double cost = operator_cost(g, x, y);
  const double a1 = alpha - 1.0;
  CheckReport moment = make_report("", "kernel_moment", kernel_harnack_lhs(model, t, x, y, alpha),
                                   cost == kInf ? kInf : std::exp(alpha * cost / (2.0 * a1 * a1)),
                                   0.0, 0.0, 0);
  CheckReport entropy =
      make_report("", "kernel_entropy", heat_kernel_kl(model, t, x, y), 0.5 * cost, 0.0, 0.0, 0);
  const nlohmann::json params = {{"t", t}, {"x", to_json(x)}, {"y", to_json(y)}, {"alpha", alpha}};
  moment.params = params;
  entropy.params = params;
  append_note(moment, "closed form");
  append_note(entropy, "closed form");
  return {moment, entropy};
}

// --- entropy-cost and HWI -------------------------------------------------------

std::pair<CheckReport, CheckReport> check_entropy_cost(const OuLevyModel& model,
                                                       const GaussianMeasure& nu, double t) {
  const AdjointModel adjoint = build_adjoint(model);
  const GaussianMeasure mu = invariant_measure(model);
  const double w2 = gaussian_w2(nu, mu);
  const nlohmann::json params = {{"t", t}, {"nu_mean", to_json(nu.mean)}};

  const GammaOperatorNorm g_tilde = gamma_operator_norm(adjoint.as_model(), t);
  const double rhs_adj = w2 == 0.0 ? 0.0 : (g_tilde.bounded ? 0.5 * g_tilde.value * g_tilde.value * w2 * w2 : kInf);
  CheckReport adj = make_report("", "entropy_cost",
                                gaussian_kl(pushforward_adjoint(adjoint, nu, t), mu), rhs_adj, 0.0, 0.0, 0);
  append_note(adj, "KL of the adjoint-evolved law vs 1/2 ||Gamma~_t||^2 W2^2");

  const GammaOperatorNorm g = gamma_operator_norm(model, t);
  const double rhs_fwd = w2 == 0.0 ? 0.0 : (g.bounded ? 0.5 * g.value * g.value * w2 * w2 : kInf);
  CheckReport fwd = make_report("", "entropy_cost_forward", gaussian_kl(pushforward(model, nu, t), mu),
                                rhs_fwd, 0.0, 0.0, 0);
  append_note(fwd, "KL of the forward-evolved law vs 1/2 ||Gamma_t||^2 W2^2");
  adj.params = params;
  fwd.params = params;
  return {adj, fwd};
}

std::pair<CheckReport, std::optional<CheckReport>> check_hwi(const OuLevyModel& model,
                                                             const GaussianMeasure& nu,
                                                             const HFunction& h, double t) {
  const AdjointModel adjoint = build_adjoint(model);
  const GaussianMeasure mu = invariant_measure(model);
  const double kl = gaussian_kl(nu, mu);
  const double w2 = gaussian_w2(nu, mu);
  const double info_term = 2.0 * fisher_information(model, nu, mu) * h.integral_of_h(t);
  const HConditionReport cert =
      verify_h_condition(model, h, time_probe_grid(t), default_probes(model.dim()));
  const nlohmann::json params = {{"t", t}, {"nu_mean", to_json(nu.mean)}, {"h", h.name}};

  const GammaOperatorNorm g_tilde = gamma_operator_norm(adjoint.as_model(), t);
  const double transport =
      w2 == 0.0 ? 0.0 : (g_tilde.bounded ? 0.5 * g_tilde.value * g_tilde.value * w2 * w2 : kInf);
  CheckReport main = make_report("", "hwi", kl, info_term + transport, 0.0, 0.0, 0);
  main.params = params;
  append_note(main, "closed form");
  if (!cert.certified) downgrade_unverified(main, "h NOT certified: " + cert.note);

  std::optional<CheckReport> symmetric;
  if (model.is_symmetric_case()) {
    const auto& root = model.noise_factor();
    const double inv_min = root.full_rank() ? 1.0 / root.min_positive_eigenvalue() : kInf;
    const double sym_transport =
        w2 == 0.0 ? 0.0 : 0.5 * inv_min * w2 * w2 / h.integral_of_inverse(t);
    CheckReport r = make_report("", "hwi_symmetric", kl, info_term + sym_transport, 0.0, 0.0, 0);
    r.params = params;
    append_note(r, "symmetric form, transport 1/2 ||R^{-1/2}||^2 W2^2 / int h^{-1}");
    if (!cert.certified) downgrade_unverified(r, "h NOT certified: " + cert.note);
    symmetric = r;
  }
  return {main, symmetric};
}

// --- semilinear -----------------------------------------------------------------

CheckReport check_semilinear_harnack(const OuLevyModel& model, const SemilinearSpec& spec, double t,
                                     const Vector& x, const Vector& y, double alpha, double p,
                                     double q, const TestFunctionSpec& f, const McOptions& mc,
                                     SemilinearHarnackTerms* terms) {
  if (!(p > 1.0) || !(q > 1.0)) throw std::invalid_argument("check_semilinear_harnack: p, q must be > 1");
  if (!(alpha / (p * q) > 1.0)) throw std::invalid_argument("check_semilinear_harnack: need alpha > p q");
  const TestFunction fx = nonnegative(f);
  const TestFunction fa = [fx, alpha](const Vector& z) { return std::pow(fx(z), alpha); };

  const SemilinearEstimate left =
      semilinear_estimate_detailed(model, spec, t, x, fx, mc.n, mc.K, mix_seed(mc.seed, kTagLhs), mc.policy);
  const SemilinearEstimate right =
      semilinear_estimate_detailed(model, spec, t, y, fa, mc.n, mc.K, mix_seed(mc.seed, kTagRhs), mc.policy);

  SemilinearHarnackTerms local;
  const double pp = p / (p - 1.0);
  const double dq = 1.0 / (q - 1.0);
  double rel_var = 0.0;
  std::string note;
  if (spec.k2 > 0.0) {
    const ExpMomentConstants consts = exp_moment_constants(model);
    const double lambda_p = 2.0 * pp * (2.0 * pp + 1.0) * spec.k2;
    const double lambda_q = 2.0 * dq * (2.0 * dq + 1.0) * spec.k2;
    local.admissible = t <= consts.horizon(lambda_p) && t <= consts.horizon(lambda_q);
    const McEstimate cp = exp_functional_estimate(model, t, lambda_p, mc.n, mc.K,
                                                  mix_seed(mc.seed, kTagConstP), mc.policy);
    const McEstimate cq = exp_functional_estimate(model, t, lambda_q, mc.n, mc.K,
                                                  mix_seed(mc.seed, kTagConstQ), mc.policy);
    local.c_p = cp.mean;
    local.c_q = cq.mean;
    const double ep = alpha * p / (2.0 * (p - 1.0));
    const double eq = alpha * q / (2.0 * (q - 1.0));
    rel_var += std::pow(ep * cp.std_error / cp.mean, 2) + std::pow(eq * cq.std_error / cq.mean, 2);
    if (!local.admissible) {
      note = "t beyond the exponential-moment horizon min(1, 1/(4 theta lambda)) with theta = " +
             std::to_string(consts.theta);
    }
  }

  const GammaNorm g = gamma_norm(model, t, x - y);
  const double integral = spec.k1 * t + spec.k2 * (mean_path_energy(model, t, x) + mean_path_energy(model, t, y));
  const double bracket = (p + 1.0) / (p - 1.0) + (q + 1.0) / (q * (q - 1.0));
  local.exponent = g.in_domain ? alpha * q * g.value * g.value / (2.0 * (alpha - p * q)) + alpha * bracket * integral
                               : kInf;

  const double lhs = std::pow(left.value.mean, alpha);
  const double lhs_se = power_se(left.value.mean, left.value.std_error, alpha);
  double rhs = kInf, rhs_se = 0.0;
  if (local.exponent != kInf) {
    const double prefactor = std::pow(local.c_p, alpha * p / (2.0 * (p - 1.0))) *
                             std::pow(local.c_q, alpha * q / (2.0 * (q - 1.0))) * std::exp(local.exponent);
    rhs = prefactor * right.value.mean;
    if (right.value.mean != 0.0) rel_var += std::pow(right.value.std_error / right.value.mean, 2);
    rhs_se = rhs * std::sqrt(rel_var);
  }
  CheckReport r = make_report("", "semilinear_harnack", lhs, rhs, lhs_se, rhs_se, mc.seed);
  append_note(r, "K = " + std::to_string(left.grid_steps) + "/" + std::to_string(right.grid_steps) +
                     ", E rho = " + std::to_string(left.rho.mean) + " +- " + std::to_string(left.rho.std_error));
  const GrowthReport growth = growth_on_probes(model, spec);
  if (!growth.ok) downgrade_unverified(r, "growth condition fails on probes: " + growth.note);
  if (!local.admissible) {
    append_note(r, note);
    r.verdict = Verdict::kInconclusive;
  }
  r.params = {{"t", t}, {"x", to_json(x)}, {"y", to_json(y)}, {"alpha", alpha}, {"p", p}, {"q", q},
              {"F", spec.name}, {"f", f.name}, {"n", mc.n}, {"K", mc.K}};
  if (terms) *terms = local;
  return r;
}

std::pair<CheckReport, CheckReport> check_rho_moments(const OuLevyModel& model,
                                                      const SemilinearSpec& spec, double t,
                                                      const Vector& x, double p, double delta,
                                                      const McOptions& mc) {
  if (!(p > 1.0) || !(delta > 0.0)) throw std::invalid_argument("check_rho_moments: need p > 1, delta > 0");
  const TestFunction one = [](const Vector&) { return 1.0; };
  const auto samples = semilinear_replicates(model, spec, t, x, one, mc.n, mc.K,
                                             mix_seed(mc.seed, kTagLhs), mc.policy);
  std::vector<double> pos(mc.n), neg(mc.n);
  for (std::int64_t i = 0; i < mc.n; ++i) {
    pos[i] = std::exp(p * samples[i].log_rho);
    neg[i] = std::exp(-delta * samples[i].log_rho);
  }
  const McEstimate mp = summarize(pos, mc.seed);
  const McEstimate md = summarize(neg, mc.seed);

  const double energy = mean_path_energy(model, t, x);
  const double base = spec.k1 * t + 2.0 * spec.k2 * energy;
  bool admissible = true;
  std::string note;
  double cp = 1.0, cp_se = 0.0, cd = 1.0, cd_se = 0.0;
  if (spec.k2 > 0.0) {
    const ExpMomentConstants consts = exp_moment_constants(model);
    const double lambda_p = 2.0 * p * (2.0 * p + 1.0) * spec.k2;
    const double lambda_d = 2.0 * delta * (2.0 * delta + 1.0) * spec.k2;
    admissible = t <= consts.horizon(lambda_p) && t <= consts.horizon(lambda_d);
    const McEstimate ep = exp_functional_estimate(model, t, lambda_p, mc.n, mc.K,
                                                  mix_seed(mc.seed, kTagConstP), mc.policy);
    const McEstimate ed = exp_functional_estimate(model, t, lambda_d, mc.n, mc.K,
                                                  mix_seed(mc.seed, kTagConstQ), mc.policy);
    cp = ep.mean;
    cp_se = ep.std_error;
    cd = ed.mean;
    cd_se = ed.std_error;
    if (!admissible) note = "t beyond the exponential-moment horizon";
  }
  const double bound_p = std::sqrt(cp) * std::exp(0.5 * p * (2.0 * p - 1.0) * base);
  const double bound_d = std::sqrt(cd) * std::exp(0.5 * delta * (2.0 * delta + 1.0) * base);
  CheckReport rp = make_report("", "rho_moment_positive", mp.mean, bound_p, mp.std_error,
                               cp_se == 0.0 ? 0.0 : 0.5 * bound_p * cp_se / cp, mc.seed);
  CheckReport rd = make_report("", "rho_moment_negative", md.mean, bound_d, md.std_error,
                               cd_se == 0.0 ? 0.0 : 0.5 * bound_d * cd_se / cd, mc.seed);
  const nlohmann::json params = {{"t", t}, {"x", to_json(x)}, {"p", p}, {"delta", delta},
                                 {"F", spec.name}, {"n", mc.n}, {"K", mc.K}};
  for (CheckReport* r : {&rp, &rd}) {
    r->params = params;
    if (!admissible) {
      append_note(*r, note);
      r->verdict = Verdict::kInconclusive;
    }
  }
  return {rp, rd};
}

// --- density norm, hyper-boundedness, h-condition ------------------------------

CheckReport check_density_norm(const OuLevyModel& model, double t, const Vector& x, double alpha) {
  const DensityNormBound b = density_norm_bound(model, t, x, alpha);
  CheckReport r = make_report("", "density_norm", b.lhs, b.rhs, 0.0, 0.0, 0);
  append_note(r, b.note);
  r.params = {{"t", t}, {"x", to_json(x)}, {"alpha", alpha}};
  return r;
}

CheckReport check_hyper_constant(const OuLevyModel& model, double t, double alpha, double eps) {
  const double c = hyper_constant(model, t, alpha, eps);
  CheckReport r = make_report("", "hyper_constant", 1.0, c, 0.0, 0.0, 0);
  append_note(r, c == kInf ? "C(t, alpha, eps) diverges" : "closed form; rhs is C(t, alpha, eps)");
  r.params = {{"t", t}, {"alpha", alpha}, {"eps", eps}};
  return r;
}

CheckReport check_h_condition(const OuLevyModel& model, const HFunction& h, double t) {
  const HConditionReport cert =
      verify_h_condition(model, h, time_probe_grid(t), default_probes(model.dim()));
  CheckReport r = make_report("", "h_condition", cert.worst_ratio, 1.0, 0.0, 0.0, 0);
  if (!cert.certified && verdict_holds(r.verdict)) r.verdict = Verdict::kViolated;
  append_note(r, cert.note);
  r.params = {{"t", t}, {"h", h.name}};
  return r;
}

}  // namespace harnack
