#pragma once

// Run configuration. The file format is YAML; see README.md for the schema.

#include "sbpfr/physics.hpp"
#include "sbpfr/solver.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sbpfr {

/// A named VCJH parameter: c_dg, c_plus, or an explicit nonnegative value.
struct CChoice {
  std::string label;
  std::optional<double> value;  // empty for the named presets

  double resolve(int p) const;
  bool is_dg() const { return label == "c_dg" || (value && *value == 0); }
};

struct RunConfig {
  Problem problem = Problem::Advection;
  std::vector<int> degrees = {2, 3, 4};
  std::vector<Variant> variants = {Variant::QuadratureI, Variant::QuadratureII, Variant::Collocation};
  std::vector<CChoice> cs = {{"c_dg", std::nullopt}, {"c_plus", std::nullopt}};
  std::vector<double> lambdas = {0.0, 1.0};
  ResidualForm strong_form = ResidualForm::StrongFR;
  ResidualForm weak_form = ResidualForm::WeakFiltered;
  std::map<int, std::string> volume_rule_files;

  int M = 8;
  double L = 1;
  std::optional<int> p_map = 1;  // empty: isoparametric (p_map = p)
  bool warp = true;
  SplitPattern split = SplitPattern::Alternating;

  double T = 1;
  double beta = 2.5e-3;

  Vec2 velocity = Vec2(1, 1);
  EulerLaw euler;
  VortexParams vortex;

  std::string output_dir = ".";
  int step_interval = 0;

  // whether the file set these, which decides the Euler desk-scale default
  bool mesh_size_set = false;
  bool degrees_set = false;

  int mapping_degree(int p) const { return p_map ? *p_map : p; }
  /// Characteristic wave speed used by the time-step rule.
  double wave_speed() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_string(const std::string& text, const std::string& source = "<string>");

/// Checks every expanded combination; throws ConfigError naming the first
/// offending one.
void validate(const RunConfig& cfg);

}  // namespace sbpfr
