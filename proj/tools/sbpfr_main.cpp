// Command-line runner: sbpfr run --config <file> [options]

#include "sbpfr/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kCheckFailed = 3;
constexpr int kUnstable = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong/weak DG and FR experiments on periodic triangular meshes"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run the experiment matrix described by a configuration file");

  std::string config_path, output_dir, dump_ops, dump_mesh;
  bool check = false, full = false, quiet = false;
  run->add_option("--config", config_path, "YAML configuration file")->required();
  run->add_option("--output-dir", output_dir, "directory for result tables (overrides the file)");
  run->add_flag("--check", check, "compare results against the acceptance thresholds");
  run->add_flag("--full", full, "run the Euler matrix at full scale (M = 16, p = 2..4)");
  run->add_option("--dump-operators", dump_ops, "write reference operators as CSV into this directory");
  run->add_option("--dump-mesh", dump_mesh, "write mesh vertices and interfaces as CSV into this directory");
  run->add_flag("-q,--quiet", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  sbpfr::RunConfig cfg;
  try {
    cfg = sbpfr::parse_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
  } catch (const sbpfr::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }

  sbpfr::ExperimentOptions opts;
  opts.full = full;
  opts.log = quiet ? nullptr : &std::cerr;
  if (!dump_ops.empty()) opts.dump_operators = dump_ops;
  if (!dump_mesh.empty()) opts.dump_mesh = dump_mesh;

  sbpfr::ExperimentOutcome outcome;
  try {
    outcome = sbpfr::run_experiments(cfg, opts);
  } catch (const sbpfr::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& t : outcome.tables) std::cout << "wrote " << t << "\n";

  if (check) {
    const auto bad = sbpfr::check_acceptance(outcome);
    for (const auto& b : bad) std::cerr << "CHECK FAILED: " << b << "\n";
    if (!bad.empty()) return outcome.unexpected_instabilities.empty() ? kCheckFailed : kUnstable;
    std::cout << "all acceptance checks passed\n";
  }
  if (!outcome.unexpected_instabilities.empty()) {
    for (const auto& u : outcome.unexpected_instabilities) std::cerr << "unexpected instability: " << u << "\n";
    return kUnstable;
  }
  return kOk;
}
