#pragma once

// Null controllability of dx = Ax dt + R^{1/2} u dt: the image norm
// ||Gamma_t x|| = ||R_t^{-1/2} T_t x|| as the minimal steering energy,
// explicit null controls and the h-function energy bound.

#include <functional>
#include <string>
#include <vector>

#include "harnack/model.h"

namespace harnack {

/// ||Gamma_t x||, with value = +inf and in_domain = false when T_t x is not in
/// the range of R_t^{1/2}.
struct GammaNorm {
  double value = 0.0;
  bool in_domain = true;
  double residual = 0.0;
};

GammaNorm gamma_norm(const SemigroupSnapshot& snap, const Vector& x);
GammaNorm gamma_norm(const OuLevyModel& model, double t, const Vector& x);

struct GammaOperatorNorm {
  double value = 0.0;      // +inf when range(T_t) is not inside range(R_t^{1/2})
  bool bounded = true;
  Vector top_direction;    // unit x maximizing ||Gamma_t x|| (empty if unbounded)
  double second_value = 0.0;
};

GammaOperatorNorm gamma_operator_norm(const SemigroupSnapshot& snap);
GammaOperatorNorm gamma_operator_norm(const OuLevyModel& model, double t);

/// A control on a uniform grid 0 = t_0 < ... < t_K = t. `values[k]` is u(t_k);
/// `midpoints[k]` is u(t_k + delta/2) for continuous controls. For
/// sample-and-hold controls `values[k]` holds on [t_k, t_{k+1}) and
/// `midpoints` is empty.
struct NullControl {
  std::vector<double> grid;
  std::vector<Vector> values;
  std::vector<Vector> midpoints;
  bool piecewise_constant = false;
  bool feasible = true;
  double energy = 0.0;
  double terminal_residual = 0.0;
  std::string note;

  double step() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
};

/// u_s = -R^{1/2} T_{t-s}^T R_t^+ T_t x0. Energy by the trapezoid rule on the
/// grid; terminal residual by RK4 integration of the controlled system.
NullControl min_energy_control(const OuLevyModel& model, double t, const Vector& x0, int K);

/// u_s = -(xi_s / int xi) R^{-1/2} T_s x0 for strictly positive xi. The
/// energy int xi^2 ||R^{-1/2} T_s x0||^2 / (int xi)^2 uses adaptive quadrature.
NullControl weighted_control(const OuLevyModel& model, double t, const Vector& x0,
                             const std::function<double(double)>& xi, int K);

/// Minimum-energy control among controls constant on each grid cell. It nulls
/// the exactly discretized system x_{k+1} = T_delta x_k + B_delta u_k, so
/// Girsanov shifts built from it couple two grid paths exactly.
NullControl sample_and_hold_control(const OuLevyModel& model, double t, const Vector& x0, int K);

/// ||x_t|| after integrating the controlled system from x0 under `control`
/// (RK4 for continuous controls, exact cell propagation for sample-and-hold).
double steer_residual(const OuLevyModel& model, const Vector& x0, const NullControl& control);

/// ||R^{-1/2} x||^2 / int_0^t h(s)^{-1} ds, +inf when x is outside R^{1/2}H.
double h_bound(const OuLevyModel& model, const HFunction& h, double t, const Vector& x);

}  // namespace harnack
