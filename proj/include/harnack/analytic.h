#pragma once

// Closed-form Gaussian calculators: the Mehler formula on exponentials,
// heat-kernel quantities relative to the invariant measure, density norms and
// the hyper-boundedness constant, and entropy / transport / Fisher terms.
//
// Kernel formulas need R_t and R_inf nonsingular. Singular cases throw
// std::domain_error ("density does not exist on supp mu") rather than
// returning regularized values.

#include <string>

#include "harnack/model.h"

namespace harnack {

struct GaussianMeasure {
  Vector mean;
  Matrix cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

/// N(m_inf, R_inf) for a stable jump-free model.
GaussianMeasure invariant_measure(const OuLevyModel& model);

/// log P_t e^{<c, .>}(x) = <c, T_t x + m_t> + 1/2 <R_t c, c>
///   + rate int_0^t (E e^{<c, T_s xi>} - 1) ds.
/// The jump integral is closed form when A = 0 and uses adaptive quadrature
/// otherwise. Throws std::domain_error when the value is not finite and
/// std::logic_error when the jump law has no exponential moment.
double mehler_log_exponential(const OuLevyModel& model, double t, const Vector& c, const Vector& x);
double mehler_exponential(const OuLevyModel& model, double t, const Vector& c, const Vector& x);

/// KL(N(T_t x + m_t, R_t) || N(T_t y + m_t, R_t)) = 1/2 <R_t^{-1} T_t(x - y), T_t(x - y)>.
double heat_kernel_kl(const OuLevyModel& model, double t, const Vector& x, const Vector& y);

/// int p_t(x, z) (p_t(x, z) / p_t(y, z))^{1/(alpha-1)} mu(dz). With
/// g = ||Gamma_t(x - y)||^2 the log density ratio is N(g/2, g) under the x
/// kernel, so the integral is exp(alpha g / (2 (alpha - 1)^2)).
double kernel_harnack_lhs(const OuLevyModel& model, double t, const Vector& x, const Vector& y,
                          double alpha);

/// int exp(-beta ||x - y||^2) mu(dy)
///   = det(I + 2 beta S)^{-1/2} exp(-beta (x - m)^T (I + 2 beta S)^{-1} (x - m)).
double gaussian_exp_integral(const GaussianMeasure& mu, double beta, const Vector& x);

struct DensityNormBound {
  double lhs = 0.0;   // ||p_t(x, .)||_{L^{alpha/(alpha-1)}(mu)}, +inf when divergent
  double rhs = 0.0;
  std::string note;
};

DensityNormBound density_norm_bound(const OuLevyModel& model, double t, const Vector& x, double alpha);

/// C(t, alpha, eps) = int [int exp(-beta ||x - y||^2) mu(dy)]^{-(1+eps)} mu(dx),
/// beta = alpha ||Gamma_t||^2 / (2 (alpha - 1)). The outer integral is a
/// Gaussian quadratic moment, +inf when it diverges.
double hyper_constant(const OuLevyModel& model, double t, double alpha, double eps);

/// Law at time t of the adjoint dynamics started from nu:
/// N(m_inf + T~_t (m - m_inf), T~_t S T~_t^T + R~_t).
GaussianMeasure pushforward_adjoint(const AdjointModel& adjoint, const GaussianMeasure& nu, double t);

/// Law at time t of the original jump-free dynamics started from nu.
GaussianMeasure pushforward(const OuLevyModel& model, const GaussianMeasure& nu, double t);

double gaussian_kl(const GaussianMeasure& nu, const GaussianMeasure& mu);
double gaussian_w2(const GaussianMeasure& nu, const GaussianMeasure& mu);

/// mu <R Df, Df> for f = sqrt(d nu / d mu), i.e. 1/4 E_nu <R grad l, grad l>
/// with l the log density ratio:
///   1/4 [tr(B^T R B S_nu) + b^T R b],  B = S_mu^{-1} - S_nu^{-1},
///   b = S_mu^{-1}(m_nu - m_mu).
double fisher_information(const OuLevyModel& model, const GaussianMeasure& nu,
                          const GaussianMeasure& mu);

}  // namespace harnack
