#pragma once

#include <functional>

namespace harnack {

/// Adaptive Gauss-Kronrod (61-point) integral of fn over [a, b]. Throws
/// std::domain_error when the integrand or the result is not finite.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double rel_tol = 1e-13);

}  // namespace harnack
