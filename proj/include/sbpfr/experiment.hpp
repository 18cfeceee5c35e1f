#pragma once

// Expands a RunConfig into strong/weak run pairs, collects diagnostics and
// compares them against the acceptance thresholds.

#include "sbpfr/config.hpp"
#include "sbpfr/diagnostics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sbpfr {

struct ExperimentOptions {
  bool full = false;
  bool write_tables = true;
  std::optional<std::string> dump_operators;
  std::optional<std::string> dump_mesh;
  std::ostream* log = nullptr;
};

struct RunSummary {
  int p = 0;
  Variant variant = Variant::QuadratureI;
  std::string c_label;
  double c = 0;
  double lambda = 0;
  bool stable_strong = true;
  bool stable_weak = true;
  std::string failure;
  Vec equivalence;
  Vec drift_strong, drift_weak;
  std::optional<double> energy_strong, energy_weak;
};

struct ExperimentOutcome {
  RunConfig config;  // after scale adjustments
  std::vector<RunSummary> runs;
  std::vector<std::string> tables;
  std::vector<std::string> unexpected_instabilities;
};

/// Euler configurations that leave the mesh size and degree list unset run
/// at desk scale (M = 8, p = 2) unless `full` is requested.
RunConfig apply_scale(RunConfig cfg, bool full);

ExperimentOutcome run_experiments(const RunConfig& cfg, const ExperimentOptions& opts);

/// One line per violated acceptance threshold; empty when all pass.
std::vector<std::string> check_acceptance(const ExperimentOutcome& outcome);

/// Writes every reference operator as CSV under dir/p<p>_<variant>_<c>/.
void dump_operators(const ReferenceOperators& ops, const std::string& dir, const std::string& c_label);

/// Writes element vertex images and the interface table.
void dump_mesh(const Discretization& disc, const std::string& dir, const std::string& tag);

}  // namespace sbpfr
