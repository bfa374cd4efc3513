#pragma once

// The finite-dimensional OU-Levy model dX = AX dt + dZ, Z with triplet
// (a, R, M) and M a finite (compound Poisson) jump measure, together with
// the objects built from it: h-functions, the sufficient conditions for an
// invariant measure, the adjoint model and semilinear drift perturbations.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harnack/linops.h"
#include "harnack/rng.h"

namespace harnack {

struct JumpAtom {
  Vector value;
  double prob = 0.0;
};

using JumpSampler = std::function<Vector(RngStream&)>;
using ExpMoment = std::function<double(const Vector&)>;

/// Finite Levy measure M = rate * law. The law is either a finite atom list
/// or an opaque sampler; exp_moment c -> E exp<c, xi> is derived for atoms and
/// optional for samplers (closed-form checks need it).
class CompoundPoissonSpec {
 public:
  static CompoundPoissonSpec from_atoms(double rate, std::vector<JumpAtom> atoms);
  static CompoundPoissonSpec from_sampler(double rate, int dim, JumpSampler sampler,
                                          ExpMoment exp_moment = {});

  double rate() const { return rate_; }
  int dim() const { return dim_; }
  bool has_atoms() const { return !atoms_.empty(); }
  const std::vector<JumpAtom>& atoms() const { return atoms_; }
  bool has_exp_moment() const { return has_atoms() || static_cast<bool>(exp_moment_); }

  Vector sample(RngStream& rng) const;
  /// E exp<c, xi>; throws std::logic_error when no closed form is available.
  double exp_moment(const Vector& c) const;
  /// E ||xi||^2 for atoms, or a 1000-draw probe for samplers.
  double second_moment() const;

 private:
  double rate_ = 0.0;
  int dim_ = 0;
  std::vector<JumpAtom> atoms_;
  std::vector<double> cumulative_;
  JumpSampler sampler_;
  ExpMoment exp_moment_;
};

/// Immutable after construction. R is validated symmetric PSD and its
/// factorization (R^{1/2}, R^{-1/2} on the range) is cached.
class OuLevyModel {
 public:
  OuLevyModel(Matrix A, Matrix R, Vector a, std::optional<CompoundPoissonSpec> jump = {});

  int dim() const { return static_cast<int>(A_.rows()); }
  const Matrix& drift() const { return A_; }
  const Matrix& noise_cov() const { return R_; }
  const Vector& drift_offset() const { return a_; }
  const std::optional<CompoundPoissonSpec>& jump() const { return jump_; }
  bool has_jumps() const { return jump_.has_value(); }
  const PsdFactorization& noise_factor() const { return noise_factor_; }

  bool drift_is_diagonal() const;
  bool noise_is_diagonal() const;
  /// A R^{1/2} = R^{1/2} A^T: the Gaussian part generates a mu-symmetric semigroup.
  bool is_symmetric_case(double tol = 1e-10) const;

  SemigroupSnapshot snapshot(double t) const;
  Matrix propagator(double t) const { return matrix_exponential(A_, t); }

  /// Same model with a different drift offset (used for constant drift shifts).
  OuLevyModel with_offset(Vector a) const;
  OuLevyModel without_jumps() const;

 private:
  Matrix A_;
  Matrix R_;
  Vector a_;
  std::optional<CompoundPoissonSpec> jump_;
  PsdFactorization noise_factor_;
};

/// Positive function h on [0, T] with optional closed forms for
/// int_0^t h(s)^{-1} ds and int_0^t h(s) ds (quadrature otherwise).
struct HFunction {
  std::string name;
  std::function<double(double)> h;
  std::function<double(double)> inverse_integral;
  std::function<double(double)> integral;

  double integral_of_inverse(double t) const;
  double integral_of_h(double t) const;

  /// h(s) = exp(rate * s).
  static HFunction exponential(double rate);
  static HFunction constant(double value);
};

struct HConditionReport {
  bool certified = false;
  double worst_ratio = 0.0;
  double worst_time = 0.0;
  int worst_probe = -1;
  std::string note;
};

/// Sampled check of ||R^{-1/2} T_t R x|| <= sqrt(h(t)) ||R^{1/2} x|| over the
/// time grid and probe set. The ratio is infinite when T_t R x leaves the
/// range of R^{1/2}. Probes in Ker R contribute nothing.
HConditionReport verify_h_condition(const OuLevyModel& model, const HFunction& h,
                                    const std::vector<double>& times,
                                    const std::vector<Vector>& probes);

/// Default probe set: the canonical basis plus `extra` seeded random unit vectors.
std::vector<Vector> default_probes(int dim, int extra = 8, std::uint64_t seed = 7);

struct AssumptionAReport {
  bool stable_drift = false;          // spectral abscissa < 0
  bool jump_second_moment = false;    // finite jump measure with finite 2nd moment
  bool trace_class_noise = false;     // automatic at finite dimension
  double abscissa = 0.0;
  std::string note;
  bool all_pass() const { return stable_drift && jump_second_moment && trace_class_noise; }
};

/// Sufficient conditions for a unique invariant measure. The limit clause of
/// the full assumption is not verified literally; the note says so.
AssumptionAReport check_assumption_A_sufficient(const OuLevyModel& model);

/// Invariant mean -A^{-1} a of a stable model.
Vector invariant_mean(const OuLevyModel& model);

/// The mu-adjoint of a stable jump-free model: A~ = R_inf A^T R_inf^{-1}, same
/// noise R, offset chosen so the invariant mean is preserved.
class AdjointModel {
 public:
  AdjointModel(const OuLevyModel& model, Matrix R_inf, Vector m_inf);

  const Matrix& R_inf() const { return R_inf_; }
  const Vector& m_inf() const { return m_inf_; }
  const Matrix& A_tilde() const { return A_tilde_; }
  const Matrix& noise_cov() const { return R_; }

  /// R_inf e^{tA^T} R_inf^{-1}.
  Matrix T_tilde(double t) const;
  /// Gramian of (A~, R).
  Matrix R_tilde(double t) const;
  /// The adjoint dynamics as an OU model; Gamma~ is computed on it.
  const OuLevyModel& as_model() const { return model_; }

 private:
  Matrix A_;
  Matrix R_;
  Matrix R_inf_;
  Matrix R_inf_inv_;
  Vector m_inf_;
  Matrix A_tilde_;
  OuLevyModel model_;
};

/// Throws std::invalid_argument for jump models and std::domain_error for an
/// unstable drift or a singular R_inf.
AdjointModel build_adjoint(const OuLevyModel& model, double rank_tol = kDefaultRankTol);

/// Semilinear drift F with the growth bound ||R^{-1/2} F(x)||^2 <= k1 + k2 ||x||^2.
struct SemilinearSpec {
  std::string name;
  std::function<Vector(const Vector&)> F;
  double k1 = 0.0;
  double k2 = 0.0;
};

struct GrowthReport {
  bool ok = true;
  bool in_range = true;
  double worst_excess = 0.0;  // max of ||R^{-1/2}F||^2 - (k1 + k2||x||^2)
  int worst_probe = -1;
  std::string note;
};

/// Spot-checks range membership F(x) in R^{1/2}H and the growth bound on probes.
GrowthReport check_growth(const OuLevyModel& model, const SemilinearSpec& spec,
                          const std::vector<Vector>& probes);

}  // namespace harnack
