#pragma once

// Scenario files: a JSON model plus a list of checks. Parsing validates the
// whole file up front (dimensions, PSD noise, known built-ins, required keys
// per check type) so that a run never fails halfway on malformed input.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "harnack/model.h"
#include "harnack/verify.h"

namespace harnack {

/// Schema or value error, with a JSON-pointer style field path.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct CheckSpec {
  std::string id;
  std::string type;
  nlohmann::json params;  // the raw check object
};

struct ScenarioDefaults {
  std::int64_t n = 100000;
  int K = 512;
  std::uint64_t seed = 1;
};

struct Scenario {
  nlohmann::json model_json;  // dim, A, R, a, jump
  OuLevyModel model;
  ScenarioDefaults defaults;
  std::vector<CheckSpec> checks;
  nlohmann::json output = nlohmann::json::object();
};

const std::vector<std::string>& check_types();

Scenario parse_scenario(const nlohmann::json& doc);
/// Reads and parses a file; JSON syntax errors become ScenarioError with a
/// line/column position.
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& scenario);

struct RunOverrides {
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  ExecPolicy policy = ExecPolicy::kParallel;
};

/// Runs one check; multi-report checks append a suffix to the id
/// ("/moment", "/entropy", "/forward", "/symmetric", "/positive", "/negative").
std::vector<CheckReport> run_check(const Scenario& scenario, const CheckSpec& check,
                                   const RunOverrides& overrides);

/// All checks (or only `only_id`) in file order. Throws ScenarioError when
/// `only_id` names no check.
std::vector<CheckReport> run_scenario(const Scenario& scenario, const RunOverrides& overrides,
                                      const std::optional<std::string>& only_id = {});

/// 1 if any VIOLATED, else 2 if any INCONCLUSIVE, else 0.
int exit_code(const std::vector<CheckReport>& reports);

/// NAME:START:STOP:STEPS with STEPS intervals (STEPS + 1 grid points).
struct SweepSpec {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  std::vector<double> grid() const;
};
SweepSpec parse_sweep(const std::string& text);

/// Returns a copy of `check` with the swept value applied. Numeric keys are
/// replaced directly; "x0"/"y0" set the first coordinate of x/y and "dx"
/// sets x = y + dx e_1.
CheckSpec apply_sweep_value(const CheckSpec& check, const std::string& name, double value);

struct SweepRow {
  std::string name;
  double value = 0.0;
  CheckReport report;
};

std::vector<SweepRow> run_sweep(const Scenario& scenario, const SweepSpec& sweep,
                                const RunOverrides& overrides,
                                const std::optional<std::string>& only_id = {});

// --- writers -----------------------------------------------------------------

/// %.17g formatting; inf/nan spelled "inf", "-inf", "nan".
std::string format_number(double v);
/// Header check_id,param_json,lhs,rhs,lhs_se,rhs_se,margin,verdict,seed.
void write_csv(std::ostream& out, const std::vector<CheckReport>& reports);
/// One JSON object per line; non-finite numbers are written as strings.
void write_jsonl(std::ostream& out, const std::vector<CheckReport>& reports);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_jsonl(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace harnack
