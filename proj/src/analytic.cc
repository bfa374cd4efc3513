#include "harnack/analytic.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "harnack/control.h"
#include "harnack/quadrature.h"

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_jump_free(const OuLevyModel& model, const char* who) {
  if (model.has_jumps()) {
    throw std::invalid_argument(std::string(who) + ": requires a jump-free model");
  }
}

void require_stable(const OuLevyModel& model, const char* who) {
  if (spectral_abscissa(model.drift()) >= 0.0) {
    throw std::domain_error(std::string(who) + ": unstable drift, no invariant measure");
  }
}

// Cholesky of a covariance that must be nonsingular.
Eigen::LLT<Matrix> spd_factor(const Matrix& S, const char* who) {
  const PsdFactorization f(S);
  if (!f.full_rank()) {
    throw std::domain_error(std::string(who) + ": singular covariance, density does not exist on supp mu");
  }
  Eigen::LLT<Matrix> llt(0.5 * (S + S.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::domain_error(std::string(who) + ": covariance is not positive definite");
  }
  return llt;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Cholesky if S is positive definite, otherwise an empty optional-like flag.
bool try_log_det(const Matrix& S, double& out) {
  Eigen::LLT<Matrix> llt(0.5 * (S + S.transpose()));
  if (llt.info() != Eigen::Success) return false;
  const Vector diag = llt.matrixL().toDenseMatrix().diagonal();
  if ((diag.array() <= 0.0).any()) return false;
  out = 2.0 * diag.array().log().sum();
  return true;
}

double jump_log_factor(const OuLevyModel& model, double t, const Vector& c) {
  if (!model.has_jumps()) return 0.0;
  const auto& jump = *model.jump();
  if (!jump.has_exp_moment()) {
    throw std::logic_error("mehler_exponential: jump law has no exponential moment");
  }
  const Matrix& A = model.drift();
  if (A.isZero(0.0)) return jump.rate() * t * (jump.exp_moment(c) - 1.0);
  const Matrix At = A.transpose();
  const bool diagonal = model.drift_is_diagonal();
  auto integrand = [&](double s) {
    const Vector v = diagonal ? Vector((At.diagonal().array() * s).exp() * c.array())
                              : Vector(matrix_exponential(At, s) * c);
    return jump.exp_moment(v) - 1.0;
  };
  return jump.rate() * integrate(integrand, 0.0, t);
}

}  // namespace

GaussianMeasure invariant_measure(const OuLevyModel& model) {
  require_jump_free(model, "invariant_measure");
  require_stable(model, "invariant_measure");
  return {invariant_mean(model), lyapunov_solve(model.drift(), model.noise_cov())};
}

double mehler_log_exponential(const OuLevyModel& model, double t, const Vector& c, const Vector& x) {
  if (c.size() != model.dim() || x.size() != model.dim()) {
    throw std::invalid_argument("mehler_exponential: dimension mismatch");
  }
  if (c.isZero(0.0)) return 0.0;
  const SemigroupSnapshot snap = model.snapshot(t);
  const double value = c.dot(snap.T * x + snap.offset) + 0.5 * c.dot(snap.gramian * c) +
                       jump_log_factor(model, t, c);
  if (!std::isfinite(value)) throw std::domain_error("mehler_exponential: divergent exponential moment");
  return value;
}

double mehler_exponential(const OuLevyModel& model, double t, const Vector& c, const Vector& x) {
  const double value = std::exp(mehler_log_exponential(model, t, c, x));
  if (!std::isfinite(value)) throw std::domain_error("mehler_exponential: value overflows");
  return value;
}

double heat_kernel_kl(const OuLevyModel& model, double t, const Vector& x, const Vector& y) {
  require_jump_free(model, "heat_kernel_kl");
  require_stable(model, "heat_kernel_kl");
  const SemigroupSnapshot snap = model.snapshot(t);
  const auto llt = spd_factor(snap.gramian, "heat_kernel_kl");
  const Vector v = snap.T * (x - y);
  return 0.5 * v.dot(llt.solve(v));
}

double kernel_harnack_lhs(const OuLevyModel& model, double t, const Vector& x, const Vector& y,
                          double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("kernel_harnack_lhs: alpha must be > 1");
  const double g = 2.0 * heat_kernel_kl(model, t, x, y);
  return std::exp(alpha * g / (2.0 * (alpha - 1.0) * (alpha - 1.0)));
}

double gaussian_exp_integral(const GaussianMeasure& mu, double beta, const Vector& x) {
  if (!(beta > 0.0)) throw std::invalid_argument("gaussian_exp_integral: beta must be > 0");
  const int d = mu.dim();
  const Matrix M = Matrix::Identity(d, d) + 2.0 * beta * mu.cov;
  Eigen::LLT<Matrix> llt(0.5 * (M + M.transpose()));
  const Vector r = x - mu.mean;
  return std::exp(-0.5 * log_det(llt) - beta * r.dot(llt.solve(r)));
}

DensityNormBound density_norm_bound(const OuLevyModel& model, double t, const Vector& x, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("density_norm_bound: alpha must be > 1");
  const GaussianMeasure mu = invariant_measure(model);
  const SemigroupSnapshot snap = model.snapshot(t);
  const auto llt1 = spd_factor(snap.gramian, "density_norm_bound");
  const auto llt2 = spd_factor(mu.cov, "density_norm_bound");
  const Vector m1 = snap.T * x + snap.offset;
  const Vector& m2 = mu.mean;
  const double r = alpha / (alpha - 1.0);
  const int d = model.dim();
  const Matrix I = Matrix::Identity(d, d);
  const Matrix S1inv = llt1.solve(I);
  const Matrix S2inv = llt2.solve(I);

  DensityNormBound out;
  const GammaOperatorNorm gnorm = gamma_operator_norm(snap);
  const double beta = alpha * gnorm.value * gnorm.value / (2.0 * (alpha - 1.0));
  out.rhs = std::pow(gaussian_exp_integral(mu, beta, x), -1.0 / alpha);

  // int n1^r n2^{1-r} dz with P = r S1^{-1} + (1-r) S2^{-1}.
  const Matrix P = r * S1inv + (1.0 - r) * S2inv;
  double logdet_P = 0.0;
  if (!try_log_det(P, logdet_P)) {
    out.lhs = kInf;
    out.note = "L^{alpha/(alpha-1)} moment diverges: r R_t^{-1} + (1-r) R_inf^{-1} is not positive definite";
    return out;
  }
  const Vector h = r * (S1inv * m1) + (1.0 - r) * (S2inv * m2);
  const double c = r * m1.dot(S1inv * m1) + (1.0 - r) * m2.dot(S2inv * m2);
  Eigen::LLT<Matrix> lltP(0.5 * (P + P.transpose()));
  const double log_integral = -0.5 * r * log_det(llt1) - 0.5 * (1.0 - r) * log_det(llt2) -
                              0.5 * logdet_P + 0.5 * h.dot(lltP.solve(h)) - 0.5 * c;
  out.lhs = std::exp(log_integral / r);
  out.note = "closed-form Gaussian moment";
  return out;
}

double hyper_constant(const OuLevyModel& model, double t, double alpha, double eps) {
  if (!(alpha > 1.0)) throw std::invalid_argument("hyper_constant: alpha must be > 1");
  if (!(eps >= 0.0)) throw std::invalid_argument("hyper_constant: eps must be >= 0");
  const GaussianMeasure mu = invariant_measure(model);
  spd_factor(mu.cov, "hyper_constant");
  const GammaOperatorNorm gnorm = gamma_operator_norm(model, t);
  if (!gnorm.bounded) return kInf;
  const double beta = alpha * gnorm.value * gnorm.value / (2.0 * (alpha - 1.0));
  if (beta == 0.0) return 1.0;
  const int d = model.dim();
  const Matrix I = Matrix::Identity(d, d);
  const Matrix M = I + 2.0 * beta * mu.cov;
  Eigen::LLT<Matrix> lltM(0.5 * (M + M.transpose()));
  const Matrix Minv = lltM.solve(I);
  const double kappa = (1.0 + eps) * beta;
  // inner^{-(1+eps)} = det(M)^{(1+eps)/2} exp(kappa z^T M^{-1} z), z = x - m, z ~ N(0, S).
  const Matrix S_half = PsdFactorization(mu.cov).sqrt();
  const Matrix Q = I - 2.0 * kappa * S_half * Minv * S_half;
  double logdet_Q = 0.0;
  if (!try_log_det(Q, logdet_Q)) return kInf;
  return std::exp(0.5 * (1.0 + eps) * log_det(lltM) - 0.5 * logdet_Q);
}

GaussianMeasure pushforward_adjoint(const AdjointModel& adjoint, const GaussianMeasure& nu, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("pushforward_adjoint: t must be > 0");
  const Matrix Tt = adjoint.T_tilde(t);
  GaussianMeasure out;
  out.mean = adjoint.m_inf() + Tt * (nu.mean - adjoint.m_inf());
  const Matrix cov = Tt * nu.cov * Tt.transpose() + adjoint.R_tilde(t);
  out.cov = 0.5 * (cov + cov.transpose());
  return out;
}

GaussianMeasure pushforward(const OuLevyModel& model, const GaussianMeasure& nu, double t) {
  require_jump_free(model, "pushforward");
  const SemigroupSnapshot snap = model.snapshot(t);
  GaussianMeasure out;
  out.mean = snap.T * nu.mean + snap.offset;
  const Matrix cov = snap.T * nu.cov * snap.T.transpose() + snap.gramian;
  out.cov = 0.5 * (cov + cov.transpose());
  return out;
}

double gaussian_kl(const GaussianMeasure& nu, const GaussianMeasure& mu) {
  if (nu.dim() != mu.dim()) throw std::invalid_argument("gaussian_kl: dimension mismatch");
  const auto llt_mu = spd_factor(mu.cov, "gaussian_kl");
  const auto llt_nu = spd_factor(nu.cov, "gaussian_kl");
  const Vector dm = mu.mean - nu.mean;
  const double trace = llt_mu.solve(nu.cov).trace();
  const double value =
      0.5 * (trace + dm.dot(llt_mu.solve(dm)) - nu.dim() + log_det(llt_mu) - log_det(llt_nu));
  return std::max(value, 0.0);
}

double gaussian_w2(const GaussianMeasure& nu, const GaussianMeasure& mu) {
  if (nu.dim() != mu.dim()) throw std::invalid_argument("gaussian_w2: dimension mismatch");
  const Matrix root_mu = PsdFactorization(mu.cov).sqrt();
  const Matrix inner = root_mu * nu.cov * root_mu;
  const Matrix cross = PsdFactorization(0.5 * (inner + inner.transpose())).sqrt();
  const double w2sq = (nu.mean - mu.mean).squaredNorm() +
                      (nu.cov + mu.cov - 2.0 * cross).trace();
  return std::sqrt(std::max(w2sq, 0.0));
}

double fisher_information(const OuLevyModel& model, const GaussianMeasure& nu,
                          const GaussianMeasure& mu) {
  if (nu.dim() != model.dim() || mu.dim() != model.dim()) {
    throw std::invalid_argument("fisher_information: dimension mismatch");
  }
  const auto llt_mu = spd_factor(mu.cov, "fisher_information");
  const auto llt_nu = spd_factor(nu.cov, "fisher_information");
  const Matrix I = Matrix::Identity(model.dim(), model.dim());
  const Matrix B = llt_mu.solve(I) - llt_nu.solve(I);
  const Vector b = llt_mu.solve(Vector(nu.mean - mu.mean));
  const Matrix& R = model.noise_cov();
  return 0.25 * ((B.transpose() * R * B * nu.cov).trace() + b.dot(R * b));
}

}  // namespace harnack
