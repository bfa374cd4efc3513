#include "harnack/registry.h"

#include <cmath>
#include <stdexcept>

namespace harnack {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + spec + "': expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("'" + spec + "': expected a number, got '" + text + "'");
  }
  return v;
}

void require_args(const std::vector<std::string>& parts, std::size_t count, const std::string& spec) {
  if (parts.size() != count + 1) {
    throw std::invalid_argument("'" + spec + "': expected " + std::to_string(count) + " argument(s)");
  }
}

}  // namespace

std::vector<std::string> semilinear_names() {
  return {"zero", "constant:b", "scaled_sine:k", "clipped_linear:k"};
}

std::vector<std::string> test_function_names() {
  return {"exp:c", "clipped_exp:c:cap", "tanh", "sigmoid", "indicator",
          "one_plus_indicator", "constant:v", "bump"};
}

SemilinearSpec make_semilinear(const std::string& spec, const OuLevyModel& model) {
  const auto parts = split(spec, ':');
  const Matrix root = model.noise_factor().sqrt();
  const int d = model.dim();
  SemilinearSpec out;
  out.name = spec;
  const std::string& kind = parts[0];
  if (kind == "zero") {
    require_args(parts, 0, spec);
    out.F = [d](const Vector&) { return Vector::Zero(d).eval(); };
  } else if (kind == "constant") {
    require_args(parts, 1, spec);
    const double b = parse_number(parts[1], spec);
    const Vector value = root * Vector::Constant(d, b);
    out.F = [value](const Vector&) { return value; };
    out.k1 = b * b * d;
  } else if (kind == "scaled_sine") {
    require_args(parts, 1, spec);
    const double k = parse_number(parts[1], spec);
    out.F = [root, k](const Vector& x) { return (k * (root * x.array().sin().matrix())).eval(); };
    out.k1 = k * k * d;
  } else if (kind == "clipped_linear") {
    require_args(parts, 1, spec);
    const double k = parse_number(parts[1], spec);
    out.F = [root, k](const Vector& x) {
      return (k * (root * x.cwiseMax(-10.0).cwiseMin(10.0))).eval();
    };
    out.k2 = k * k;
  } else {
    throw std::invalid_argument("unknown F '" + spec + "'");
  }
  return out;
}

TestFunctionSpec make_test_function(const std::string& spec, int dim) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  TestFunctionSpec out;
  out.name = spec;
  if (kind == "exp") {
    require_args(parts, 1, spec);
    const double c = parse_number(parts[1], spec);
    out.f = [c](const Vector& z) { return std::exp(c * z.sum()); };
    out.exp_coeff = Vector::Constant(dim, c);
  } else if (kind == "clipped_exp") {
    require_args(parts, 2, spec);
    const double c = parse_number(parts[1], spec);
    const double cap = parse_number(parts[2], spec);
    out.f = [c, cap](const Vector& z) { return std::min(std::exp(c * z.sum()), cap); };
  } else if (kind == "tanh") {
    require_args(parts, 0, spec);
    out.f = [](const Vector& z) { return std::tanh(z.sum()); };
  } else if (kind == "sigmoid") {
    require_args(parts, 0, spec);
    out.f = [](const Vector& z) { return 1.0 / (1.0 + std::exp(-z.sum())); };
  } else if (kind == "indicator") {
    require_args(parts, 0, spec);
    out.f = [](const Vector& z) { return z.sum() > 0.0 ? 1.0 : 0.0; };
  } else if (kind == "one_plus_indicator") {
    require_args(parts, 0, spec);
    out.f = [](const Vector& z) { return z.sum() > 0.0 ? 2.0 : 1.0; };
  } else if (kind == "constant") {
    require_args(parts, 1, spec);
    const double v = parse_number(parts[1], spec);
    out.f = [v](const Vector&) { return v; };
    if (v == 1.0) out.exp_coeff = Vector::Zero(dim);
  } else if (kind == "bump") {
    require_args(parts, 0, spec);
    out.f = [](const Vector& z) {
      const double s = z.sum();
      return std::exp(-s * s);
    };
  } else {
    throw std::invalid_argument("unknown test function '" + spec + "'");
  }
  return out;
}

HFunction make_h_function(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "exp") {
    require_args(parts, 1, spec);
    HFunction h = HFunction::exponential(parse_number(parts[1], spec));
    h.name = spec;
    return h;
  }
  if (kind == "const") {
    require_args(parts, 1, spec);
    HFunction h = HFunction::constant(parse_number(parts[1], spec));
    h.name = spec;
    return h;
  }
  throw std::invalid_argument("unknown h '" + spec + "'");
}

}  // namespace harnack
