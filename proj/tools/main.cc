// harnack: run scenario checks or parameter sweeps.
//
//   harnack run   --config FILE [--check ID] [--samples N] [--seed S] [--out PATH] [--format csv|json]
//   harnack sweep --config FILE --sweep NAME:START:STOP:STEPS [same flags]
//
// Exit codes: 0 all hold, 1 a violation, 2 inconclusive, 3 input or runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "harnack/scenario.h"

namespace {

constexpr int kInputError = 3;

struct Flags {
  std::string config;
  std::string check;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string sweep;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "scenario JSON file")->required();
  cmd->add_option("--check", flags.check, "run only the check with this id");
  cmd->add_option("--samples", flags.samples, "override the Monte Carlo sample count")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
  cmd->add_option("--seed", flags.seed, "override every check seed");
  cmd->add_option("--out", flags.out, "output path (default: stdout)");
  cmd->add_option("--format", flags.format, "csv or json (JSON lines)")->check(CLI::IsMember({"csv", "json"}));
}

int execute(const Flags& flags, const CLI::App& app, bool sweep_mode) {
  const harnack::Scenario scenario = harnack::load_scenario(flags.config);

  harnack::RunOverrides overrides;
  if (app.count("--samples")) overrides.samples = flags.samples;
  if (app.count("--seed")) overrides.seed = flags.seed;
  std::optional<std::string> only;
  if (!flags.check.empty()) only = flags.check;

  std::string format = scenario.output.value("format", std::string("csv"));
  if (!flags.format.empty()) format = flags.format;
  std::string path = scenario.output.value("path", std::string());
  if (!flags.out.empty()) path = flags.out;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw harnack::ScenarioError("--out", "cannot write '" + path + "'");
    out = &file;
  }

  int code = 0;
  if (sweep_mode) {
    const auto rows = harnack::run_sweep(scenario, harnack::parse_sweep(flags.sweep), overrides, only);
    if (format == "json") harnack::write_sweep_jsonl(*out, rows);
    else harnack::write_sweep_csv(*out, rows);
    std::vector<harnack::CheckReport> reports;
    for (const auto& r : rows) reports.push_back(r.report);
    code = harnack::exit_code(reports);
  } else {
    const auto reports = harnack::run_scenario(scenario, overrides, only);
    if (format == "json") harnack::write_jsonl(*out, reports);
    else harnack::write_csv(*out, reports);
    code = harnack::exit_code(reports);
  }
  out->flush();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harnack inequality checks for OU processes with Levy noise"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* run = app.add_subcommand("run", "run all checks in a scenario");
  add_common(run, flags);
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one numeric parameter over a grid");
  add_common(sweep, flags);
  sweep->add_option("--sweep", flags.sweep, "NAME:START:STOP:STEPS")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    return execute(flags, sweep->parsed() ? *sweep : *run, sweep->parsed());
  } catch (const harnack::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kInputError;
}
