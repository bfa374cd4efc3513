#include "harnack/scenario.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "harnack/registry.h"

namespace harnack {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string> kTopKeys = {"dim", "A", "R", "a", "jump", "defaults", "checks", "output", "description"};
const std::set<std::string> kCheckKeys = {"id", "type", "t", "x", "y", "alpha", "p", "q", "eps", "delta",
                                          "f", "bound_mode", "h", "nu", "F", "n", "K", "seed",
                                          "control", "description"};

struct TypeRule {
  std::string type;
  std::vector<std::string> required;
};

const std::vector<TypeRule>& type_rules() {
  static const std::vector<TypeRule> rules = {
      {"harnack", {"t", "x", "y", "alpha", "f"}},
      {"log_harnack", {"t", "x", "y", "f"}},
      {"gradient", {"t", "x", "y", "f"}},
      {"kernel", {"t", "x", "y", "alpha"}},
      {"entropy_cost", {"t", "nu"}},
      {"hwi", {"t", "nu", "h"}},
      {"semilinear_harnack", {"t", "x", "y", "alpha", "p", "q", "F", "f"}},
      {"rho_moments", {"t", "x", "p", "delta", "F"}},
      {"density_norm", {"t", "x", "alpha"}},
      {"hyper_constant", {"t", "alpha", "eps"}},
      {"h_condition", {"t", "h"}},
  };
  return rules;
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError(path, "expected a finite number");
  return x;
}

std::int64_t as_integer(const json& v, const std::string& path, std::int64_t min_value) {
  if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min_value) throw ScenarioError(path, "must be >= " + std::to_string(min_value));
  return x;
}

std::uint64_t as_seed(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ScenarioError(path, "expected a nonnegative integer seed");
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ScenarioError(path, "expected a string");
  return v.get<std::string>();
}

Vector as_vector(const json& v, int dim, const std::string& path) {
  if (!v.is_array()) throw ScenarioError(path, "expected an array of " + std::to_string(dim) + " numbers");
  if (static_cast<int>(v.size()) != dim) {
    throw ScenarioError(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  }
  Vector out(dim);
  for (int i = 0; i < dim; ++i) out(i) = as_number(v[i], child(path, i));
  return out;
}

Matrix as_matrix(const json& v, int dim, const std::string& path) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    throw ScenarioError(path, "expected " + std::to_string(dim) + " rows (row-major nested arrays)");
  }
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) out.row(i) = as_vector(v[i], dim, child(path, i)).transpose();
  return out;
}

OuLevyModel build_model(const json& doc) {
  if (!doc.contains("dim")) throw ScenarioError("/dim", "missing");
  const int dim = static_cast<int>(as_integer(doc["dim"], "/dim", 1));
  if (!doc.contains("A")) throw ScenarioError("/A", "missing");
  if (!doc.contains("R")) throw ScenarioError("/R", "missing");
  Matrix A = as_matrix(doc["A"], dim, "/A");
  Matrix R = as_matrix(doc["R"], dim, "/R");
  Vector a = doc.contains("a") ? as_vector(doc["a"], dim, "/a") : Vector::Zero(dim);
  if (!is_symmetric(R)) throw ScenarioError("/R", "not symmetric");
  try {
    require_psd(R, "R");
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/R", e.what());
  }
  std::optional<CompoundPoissonSpec> jump;
  if (doc.contains("jump") && !doc["jump"].is_null()) {
    const json& j = doc["jump"];
    if (!j.is_object()) throw ScenarioError("/jump", "expected an object");
    if (!j.contains("rate")) throw ScenarioError("/jump/rate", "missing");
    if (!j.contains("atoms")) throw ScenarioError("/jump/atoms", "missing");
    const double rate = as_number(j["rate"], "/jump/rate");
    if (!(rate > 0.0)) throw ScenarioError("/jump/rate", "must be > 0");
    const json& atoms = j["atoms"];
    if (!atoms.is_array() || atoms.empty()) throw ScenarioError("/jump/atoms", "expected a nonempty array");
    std::vector<JumpAtom> list;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::string path = child("/jump/atoms", k);
      if (!atoms[k].is_object()) throw ScenarioError(path, "expected {\"value\", \"prob\"}");
      if (!atoms[k].contains("value")) throw ScenarioError(child(path, "value"), "missing");
      if (!atoms[k].contains("prob")) throw ScenarioError(child(path, "prob"), "missing");
      JumpAtom atom;
      atom.value = as_vector(atoms[k]["value"], dim, child(path, "value"));
      atom.prob = as_number(atoms[k]["prob"], child(path, "prob"));
      if (atom.prob < 0.0) throw ScenarioError(child(path, "prob"), "must be >= 0");
      list.push_back(std::move(atom));
    }
    try {
      jump = CompoundPoissonSpec::from_atoms(rate, std::move(list));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("/jump", e.what());
    }
  }
  return OuLevyModel(std::move(A), std::move(R), std::move(a), std::move(jump));
}

void validate_check(const json& c, const std::string& path, const OuLevyModel& model) {
  const int d = model.dim();
  const std::string type = as_string(c["type"], child(path, "type"));
  const auto rule = std::find_if(type_rules().begin(), type_rules().end(),
                                 [&](const TypeRule& r) { return r.type == type; });
  if (rule == type_rules().end()) throw ScenarioError(child(path, "type"), "unknown check type '" + type + "'");
  for (const auto& [key, value] : c.items()) {
    if (!kCheckKeys.count(key)) throw ScenarioError(child(path, key), "unknown key");
  }
  for (const auto& key : rule->required) {
    if (!c.contains(key)) throw ScenarioError(child(path, key), "required for type '" + type + "'");
  }
  if (c.contains("t") && !(as_number(c["t"], child(path, "t")) > 0.0)) throw ScenarioError(child(path, "t"), "must be > 0");
  if (c.contains("alpha") && !(as_number(c["alpha"], child(path, "alpha")) > 1.0)) {
    throw ScenarioError(child(path, "alpha"), "must be > 1");
  }
  for (const char* key : {"p", "q"}) {
    if (c.contains(key) && !(as_number(c[key], child(path, key)) > 1.0)) throw ScenarioError(child(path, key), "must be > 1");
  }
  if (c.contains("eps") && !(as_number(c["eps"], child(path, "eps")) >= 0.0)) throw ScenarioError(child(path, "eps"), "must be >= 0");
  if (c.contains("delta") && !(as_number(c["delta"], child(path, "delta")) > 0.0)) throw ScenarioError(child(path, "delta"), "must be > 0");
  if (type == "semilinear_harnack") {
    const double ratio = c["alpha"].get<double>() / (c["p"].get<double>() * c["q"].get<double>());
    if (!(ratio > 1.0)) throw ScenarioError(child(path, "alpha"), "must exceed p * q");
  }
  for (const char* key : {"x", "y"}) {
    if (c.contains(key)) as_vector(c[key], d, child(path, key));
  }
  if (c.contains("n")) as_integer(c["n"], child(path, "n"), 2);
  if (c.contains("K")) as_integer(c["K"], child(path, "K"), 1);
  if (c.contains("seed")) as_seed(c["seed"], child(path, "seed"));
  try {
    if (c.contains("f")) make_test_function(as_string(c["f"], child(path, "f")), d);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(child(path, "f"), e.what());
  }
  try {
    if (c.contains("F")) make_semilinear(as_string(c["F"], child(path, "F")), model);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(child(path, "F"), e.what());
  }
  try {
    if (c.contains("h")) make_h_function(as_string(c["h"], child(path, "h")));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(child(path, "h"), e.what());
  }
  if (c.contains("bound_mode")) {
    try {
      const BoundMode mode = parse_bound_mode(as_string(c["bound_mode"], child(path, "bound_mode")));
      if (mode == BoundMode::kHFunction && !c.contains("h")) {
        throw ScenarioError(child(path, "h"), "required for bound_mode h_function");
      }
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(child(path, "bound_mode"), e.what());
    }
  }
  if (c.contains("nu")) {
    const json& nu = c["nu"];
    const std::string np = child(path, "nu");
    if (!nu.is_object() || !nu.contains("mean")) throw ScenarioError(np, "expected {\"mean\": [...], \"cov\": [[...]]}");
    as_vector(nu["mean"], d, child(np, "mean"));
    if (nu.contains("cov")) {
      const Matrix cov = as_matrix(nu["cov"], d, child(np, "cov"));
      if (!is_symmetric(cov)) throw ScenarioError(child(np, "cov"), "not symmetric");
    }
  }
  if (c.contains("control")) {
    const json& ctl = c["control"];
    const std::string cp = child(path, "control");
    if (!ctl.is_object() || !ctl.contains("kind")) throw ScenarioError(cp, "expected {\"kind\": ...}");
    const std::string kind = as_string(ctl["kind"], child(cp, "kind"));
    if (kind != "min_energy" && kind != "weighted_exp") {
      throw ScenarioError(child(cp, "kind"), "expected min_energy or weighted_exp");
    }
    if (kind == "weighted_exp") {
      if (!ctl.contains("rate")) throw ScenarioError(child(cp, "rate"), "missing");
      as_number(ctl["rate"], child(cp, "rate"));
    }
    if (ctl.contains("K")) as_integer(ctl["K"], child(cp, "K"), 1);
  }
}

Vector vec(const json& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  return out;
}

Matrix mat(const json& v) {
  const auto d = static_cast<Eigen::Index>(v.size());
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) out.row(i) = vec(v[i]).transpose();
  return out;
}

double num(const CheckSpec& c, const char* key) { return c.params.at(key).get<double>(); }

GaussianMeasure nu_of(const CheckSpec& c, const OuLevyModel& model) {
  const json& nu = c.params.at("nu");
  GaussianMeasure out;
  out.mean = vec(nu.at("mean"));
  out.cov = nu.contains("cov") ? mat(nu.at("cov")) : invariant_measure(model).cov;
  return out;
}

std::optional<double> control_energy(const CheckSpec& c, const OuLevyModel& model, double t,
                                     const Vector& x0) {
  if (!c.params.contains("control")) return std::nullopt;
  const json& ctl = c.params.at("control");
  const int K = ctl.contains("K") ? ctl.at("K").get<int>() : 2000;
  const std::string kind = ctl.at("kind").get<std::string>();
  NullControl u;
  if (kind == "min_energy") {
    u = min_energy_control(model, t, x0, K);
  } else {
    const double rate = ctl.at("rate").get<double>();
    u = weighted_control(model, t, x0, [rate](double s) { return std::exp(rate * s); }, K);
  }
  return u.feasible ? u.energy : kInf;
}

}  // namespace

const std::vector<std::string>& check_types() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& r : type_rules()) out.push_back(r.type);
    return out;
  }();
  return names;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kTopKeys.count(key)) throw ScenarioError("/" + key, "unknown key");
  }
  OuLevyModel model = build_model(doc);
  json model_json = json::object();
  for (const char* key : {"dim", "A", "R", "a", "jump"}) {
    if (doc.contains(key)) model_json[key] = doc[key];
  }
  Scenario scenario{model_json, std::move(model), {}, {}, json::object()};

  if (doc.contains("defaults")) {
    const json& d = doc["defaults"];
    if (!d.is_object()) throw ScenarioError("/defaults", "expected an object");
    for (const auto& [key, value] : d.items()) {
      if (key != "n" && key != "K" && key != "seed") throw ScenarioError("/defaults/" + key, "unknown key");
    }
    if (d.contains("n")) scenario.defaults.n = as_integer(d["n"], "/defaults/n", 2);
    if (d.contains("K")) scenario.defaults.K = static_cast<int>(as_integer(d["K"], "/defaults/K", 1));
    if (d.contains("seed")) scenario.defaults.seed = as_seed(d["seed"], "/defaults/seed");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_object()) throw ScenarioError("/output", "expected an object");
    scenario.output = doc["output"];
    if (scenario.output.contains("format")) {
      const std::string f = as_string(scenario.output["format"], "/output/format");
      if (f != "csv" && f != "json") throw ScenarioError("/output/format", "expected csv or json");
    }
    if (scenario.output.contains("path")) as_string(scenario.output["path"], "/output/path");
  }
  if (!doc.contains("checks")) throw ScenarioError("/checks", "missing");
  const json& checks = doc["checks"];
  if (!checks.is_array()) throw ScenarioError("/checks", "expected an array");
  std::set<std::string> ids;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const std::string path = child("/checks", k);
    const json& c = checks[k];
    if (!c.is_object()) throw ScenarioError(path, "expected an object");
    if (!c.contains("id")) throw ScenarioError(child(path, "id"), "missing");
    if (!c.contains("type")) throw ScenarioError(child(path, "type"), "missing");
    const std::string id = as_string(c["id"], child(path, "id"));
    if (id.empty()) throw ScenarioError(child(path, "id"), "must be nonempty");
    if (!ids.insert(id).second) throw ScenarioError(child(path, "id"), "duplicate id '" + id + "'");
    validate_check(c, path, scenario.model);
    scenario.checks.push_back({id, c["type"].get<std::string>(), c});
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("", path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                ": JSON syntax error: " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& scenario) {
  json doc = scenario.model_json;
  doc["defaults"] = {{"n", scenario.defaults.n}, {"K", scenario.defaults.K}, {"seed", scenario.defaults.seed}};
  doc["checks"] = json::array();
  for (const auto& c : scenario.checks) doc["checks"].push_back(c.params);
  if (!scenario.output.empty()) doc["output"] = scenario.output;
  return doc;
}

std::vector<CheckReport> run_check(const Scenario& scenario, const CheckSpec& check,
                                   const RunOverrides& overrides) {
  const OuLevyModel& model = scenario.model;
  const int d = model.dim();
  const json& p = check.params;
  McOptions mc;
  mc.n = overrides.samples ? *overrides.samples : (p.contains("n") ? p["n"].get<std::int64_t>() : scenario.defaults.n);
  mc.K = p.contains("K") ? p["K"].get<int>() : scenario.defaults.K;
  mc.seed = overrides.seed ? *overrides.seed : (p.contains("seed") ? p["seed"].get<std::uint64_t>() : scenario.defaults.seed);
  mc.policy = overrides.policy;

  const double t = num(check, "t");
  const auto x = [&] { return vec(p.at("x")); };
  const auto y = [&] { return vec(p.at("y")); };
  const auto f = [&] { return make_test_function(p.at("f").get<std::string>(), d); };

  std::vector<std::pair<std::string, CheckReport>> out;
  const std::string& type = check.type;
  if (type == "harnack") {
    HarnackOptions opts;
    if (p.contains("bound_mode")) opts.mode = parse_bound_mode(p["bound_mode"].get<std::string>());
    if (p.contains("h")) opts.h = make_h_function(p["h"].get<std::string>());
    opts.control_energy = control_energy(check, model, t, Vector(x() - y()));
    out.emplace_back("", check_harnack(model, t, x(), y(), num(check, "alpha"), f(), opts, mc));
  } else if (type == "log_harnack") {
    out.emplace_back("", check_log_harnack(model, t, x(), y(), f(), mc));
  } else if (type == "gradient") {
    out.emplace_back("", check_gradient_estimate(model, t, x(), y(), f(), mc));
  } else if (type == "kernel") {
    auto [moment, entropy] = check_kernel_inequalities(model, t, x(), y(), num(check, "alpha"));
    out.emplace_back("/moment", moment);
    out.emplace_back("/entropy", entropy);
  } else if (type == "entropy_cost") {
    auto [adj, fwd] = check_entropy_cost(model, nu_of(check, model), t);
    out.emplace_back("", adj);
    out.emplace_back("/forward", fwd);
  } else if (type == "hwi") {
    auto [main, sym] = check_hwi(model, nu_of(check, model), make_h_function(p.at("h").get<std::string>()), t);
    out.emplace_back("", main);
    if (sym) out.emplace_back("/symmetric", *sym);
  } else if (type == "semilinear_harnack") {
    const SemilinearSpec spec = make_semilinear(p.at("F").get<std::string>(), model);
    out.emplace_back("", check_semilinear_harnack(model, spec, t, x(), y(), num(check, "alpha"),
                                                  num(check, "p"), num(check, "q"), f(), mc));
  } else if (type == "rho_moments") {
    const SemilinearSpec spec = make_semilinear(p.at("F").get<std::string>(), model);
    auto [pos, neg] = check_rho_moments(model, spec, t, x(), num(check, "p"), num(check, "delta"), mc);
    out.emplace_back("/positive", pos);
    out.emplace_back("/negative", neg);
  } else if (type == "density_norm") {
    out.emplace_back("", check_density_norm(model, t, x(), num(check, "alpha")));
  } else if (type == "hyper_constant") {
    out.emplace_back("", check_hyper_constant(model, t, num(check, "alpha"), num(check, "eps")));
  } else if (type == "h_condition") {
    out.emplace_back("", check_h_condition(model, make_h_function(p.at("h").get<std::string>()), t));
  } else {
    throw ScenarioError("", "unknown check type '" + type + "'");
  }

  std::vector<CheckReport> reports;
  for (auto& [suffix, r] : out) {
    r.check_id = check.id + suffix;
    r.seed = mc.seed;
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<CheckReport> run_scenario(const Scenario& scenario, const RunOverrides& overrides,
                                      const std::optional<std::string>& only_id) {
  std::vector<CheckReport> reports;
  bool matched = false;
  for (const auto& check : scenario.checks) {
    if (only_id && check.id != *only_id) continue;
    matched = true;
    for (auto& r : run_check(scenario, check, overrides)) reports.push_back(std::move(r));
  }
  if (only_id && !matched) throw ScenarioError("/checks", "no check with id '" + *only_id + "'");
  return reports;
}

int exit_code(const std::vector<CheckReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::kViolated) return 1;
    if (r.verdict == Verdict::kInconclusive) inconclusive = true;
  }
  return inconclusive ? 2 : 0;
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> out;
  for (int k = 0; k <= steps; ++k) out.push_back(start + (stop - start) * static_cast<double>(k) / steps);
  out.back() = stop;
  return out;
}

SweepSpec parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4 || parts[0].empty()) {
    throw ScenarioError("--sweep", "expected NAME:START:STOP:STEPS, got '" + text + "'");
  }
  SweepSpec s;
  s.name = parts[0];
  try {
    std::size_t used = 0;
    s.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("start");
    s.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("stop");
    s.steps = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("steps");
  } catch (const std::exception&) {
    throw ScenarioError("--sweep", "expected NAME:START:STOP:STEPS, got '" + text + "'");
  }
  if (s.steps < 1) throw ScenarioError("--sweep", "STEPS must be >= 1");
  return s;
}

namespace {

bool sweep_applies(const CheckSpec& check, const std::string& name) {
  if (name == "x0" || name == "dx") return check.params.contains("x") && (name == "x0" || check.params.contains("y"));
  if (name == "y0") return check.params.contains("y");
  return check.params.contains(name) && check.params[name].is_number();
}

}  // namespace

CheckSpec apply_sweep_value(const CheckSpec& check, const std::string& name, double value) {
  CheckSpec out = check;
  json& p = out.params;
  if (name == "x0") {
    p["x"][0] = value;
  } else if (name == "y0") {
    p["y"][0] = value;
  } else if (name == "dx") {
    p["x"] = p["y"];
    p["x"][0] = p["y"][0].get<double>() + value;
  } else if (name == "n" || name == "K" || name == "seed") {
    p[name] = static_cast<std::int64_t>(std::llround(value));
  } else {
    if (!p.contains(name) || !p[name].is_number()) {
      throw ScenarioError("--sweep", "'" + name + "' is not a numeric parameter of check '" + check.id + "'");
    }
    p[name] = value;
  }
  return out;
}

std::vector<SweepRow> run_sweep(const Scenario& scenario, const SweepSpec& sweep,
                                const RunOverrides& overrides, const std::optional<std::string>& only_id) {
  std::vector<SweepRow> rows;
  bool matched = false;
  for (const auto& check : scenario.checks) {
    if (only_id && check.id != *only_id) continue;
    if (!sweep_applies(check, sweep.name)) {
      if (only_id) {
        throw ScenarioError("--sweep", "'" + sweep.name + "' is not a numeric parameter of check '" + check.id + "'");
      }
      continue;
    }
    matched = true;
    for (double value : sweep.grid()) {
      const CheckSpec point = apply_sweep_value(check, sweep.name, value);
      for (auto& r : run_check(scenario, point, overrides)) rows.push_back({sweep.name, value, std::move(r)});
    }
  }
  if (only_id && !matched) throw ScenarioError("/checks", "no check with id '" + *only_id + "'");
  if (!matched) throw ScenarioError("--sweep", "no check has a numeric parameter '" + sweep.name + "'");
  return rows;
}

// --- writers -----------------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const CheckReport& r) {
  std::string row = r.check_id + "," + csv_quote(r.params.dump()) + "," + format_number(r.lhs) + "," +
                    format_number(r.rhs) + "," + format_number(r.lhs_se) + "," + format_number(r.rhs_se) +
                    "," + format_number(r.margin) + "," + to_string(r.verdict) + "," + std::to_string(r.seed);
  return row;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json report_json(const CheckReport& r) {
  json out = json::object();
  out["check_id"] = r.check_id;
  out["type"] = r.type;
  out["param_json"] = r.params;
  out["lhs"] = json_number(r.lhs);
  out["rhs"] = json_number(r.rhs);
  out["lhs_se"] = json_number(r.lhs_se);
  out["rhs_se"] = json_number(r.rhs_se);
  out["margin"] = json_number(r.margin);
  out["verdict"] = to_string(r.verdict);
  out["seed"] = r.seed;
  out["note"] = r.note;
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<CheckReport>& reports) {
  out << "check_id,param_json,lhs,rhs,lhs_se,rhs_se,margin,verdict,seed\n";
  for (const auto& r : reports) out << csv_row(r) << '\n';
}

void write_jsonl(std::ostream& out, const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) out << report_json(r).dump() << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "param,value,check_id,param_json,lhs,rhs,lhs_se,rhs_se,margin,verdict,seed\n";
  for (const auto& row : rows) out << row.name << ',' << format_number(row.value) << ',' << csv_row(row.report) << '\n';
}

void write_sweep_jsonl(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (const auto& row : rows) {
    json j = report_json(row.report);
    j["param"] = row.name;
    j["value"] = row.value;
    out << j.dump() << '\n';
  }
}

}  // namespace harnack
