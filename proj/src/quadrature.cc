#include "harnack/quadrature.h"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace harnack {

double integrate(const std::function<double(double)>& fn, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      fn, a, b, /*max_depth=*/20, rel_tol, &error);
  if (!std::isfinite(value)) throw std::domain_error("integrate: non-finite integral");
  return value;
}

}  // namespace harnack
