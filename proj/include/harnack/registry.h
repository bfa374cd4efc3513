#pragma once

// Named built-ins referenced from scenario files.
//
// Semilinear drifts F (growth constants in parentheses):
//   zero                 F = 0                              (k1 = 0, k2 = 0)
//   constant:b           F = R^{1/2} (b, ..., b)            (k1 = b^2 d)
//   scaled_sine:k        F = k R^{1/2} sin(x)               (k1 = k^2 d)
//   clipped_linear:k     F = k R^{1/2} clip(x, -10, 10)     (k2 = k^2)
//
// Test functions act on s = sum_i z_i:
//   exp:c  clipped_exp:c:cap  tanh  sigmoid  indicator  one_plus_indicator
//   constant:v  bump (= exp(-s^2))
//
// h-functions: exp:k (h = e^{k s}), const:c.

#include <string>
#include <vector>

#include "harnack/model.h"
#include "harnack/verify.h"

namespace harnack {

SemilinearSpec make_semilinear(const std::string& spec, const OuLevyModel& model);
TestFunctionSpec make_test_function(const std::string& spec, int dim);
HFunction make_h_function(const std::string& spec);

std::vector<std::string> semilinear_names();
std::vector<std::string> test_function_names();

}  // namespace harnack
