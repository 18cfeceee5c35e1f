#include "sbpfr/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sbpfr {

double CChoice::resolve(int p) const {
  if (value) return *value;
  if (label == "c_dg") return 0.0;
  if (label == "c_plus") return vcjh_c_plus(p);
  throw ConfigError("unknown VCJH parameter `" + label + "`");
}

double RunConfig::wave_speed() const {
  return problem == Problem::Advection ? velocity.norm() : vortex.mach;
}

namespace {

std::string where(const std::string& source, const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null()) return source;
  return source + ":" + std::to_string(m.line + 1);
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& section,
                const std::string& source) {
  if (!map.IsMap()) throw ConfigError(where(source, map) + ": section `" + section + "` must be a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw ConfigError(where(source, kv.first) + ": unknown key `" + (section.empty() ? "" : section + ".") +
                        key + "`");
  }
}

template <typename T>
T get(const YAML::Node& n, const std::string& key, const std::string& source) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(source, n) + ": bad value for `" + key + "`");
  }
}

template <typename T>
std::vector<T> get_list(const YAML::Node& n, const std::string& key, const std::string& source) {
  if (n.IsScalar()) return {get<T>(n, key, source)};
  if (!n.IsSequence()) throw ConfigError(where(source, n) + ": `" + key + "` must be a value or a list");
  std::vector<T> out;
  for (const auto& item : n) out.push_back(get<T>(item, key, source));
  if (out.empty()) throw ConfigError(where(source, n) + ": `" + key + "` is empty");
  return out;
}

Vec2 get_vec2(const YAML::Node& n, const std::string& key, const std::string& source) {
  const auto v = get_list<double>(n, key, source);
  if (v.size() != 2) throw ConfigError(where(source, n) + ": `" + key + "` needs two entries");
  return {v[0], v[1]};
}

CChoice parse_c(const YAML::Node& n, const std::string& source) {
  const auto text = get<std::string>(n, "scheme.c", source);
  if (text == "c_dg" || text == "c_plus") return {text, std::nullopt};
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return {text, v};
  } catch (const std::exception&) {
    throw ConfigError(where(source, n) + ": `scheme.c` entries must be c_dg, c_plus or a number");
  }
}

RunConfig parse_node(const YAML::Node& root, const std::string& source) {
  if (!root.IsMap()) throw ConfigError(source + ": configuration must be a mapping");
  check_keys(root, {"problem", "output_dir", "scheme", "mesh", "time", "advection", "euler", "diagnostics"}, "",
             source);
  if (!root["problem"]) throw ConfigError(source + ": missing required key `problem`");

  RunConfig cfg;
  const auto problem = get<std::string>(root["problem"], "problem", source);
  if (problem == "advection") {
    cfg.problem = Problem::Advection;
  } else if (problem == "euler") {
    cfg.problem = Problem::Euler;
    cfg.L = 10;
    cfg.M = 16;
    cfg.p_map.reset();
    cfg.vortex = VortexParams{};
  } else {
    throw ConfigError(where(source, root["problem"]) + ": problem must be advection or euler");
  }
  if (root["output_dir"]) cfg.output_dir = get<std::string>(root["output_dir"], "output_dir", source);

  if (const auto s = root["scheme"]) {
    check_keys(s, {"p", "variants", "c", "lambda", "strong_form", "weak_form", "volume_rule_files"}, "scheme",
               source);
    if (s["p"]) {
      cfg.degrees = get_list<int>(s["p"], "scheme.p", source);
      cfg.degrees_set = true;
    }
    if (s["variants"]) {
      cfg.variants.clear();
      for (const auto& v : get_list<std::string>(s["variants"], "scheme.variants", source)) {
        try {
          cfg.variants.push_back(variant_from_string(v));
        } catch (const ConfigError& e) {
          throw ConfigError(where(source, s["variants"]) + ": " + e.what());
        }
      }
    }
    if (s["c"]) {
      cfg.cs.clear();
      if (s["c"].IsSequence()) {
        for (const auto& item : s["c"]) cfg.cs.push_back(parse_c(item, source));
      } else {
        cfg.cs.push_back(parse_c(s["c"], source));
      }
    }
    if (s["lambda"]) cfg.lambdas = get_list<double>(s["lambda"], "scheme.lambda", source);
    try {
      if (s["strong_form"]) cfg.strong_form = form_from_string(get<std::string>(s["strong_form"], "scheme.strong_form", source));
      if (s["weak_form"]) cfg.weak_form = form_from_string(get<std::string>(s["weak_form"], "scheme.weak_form", source));
    } catch (const ConfigError& e) {
      throw ConfigError(where(source, s) + ": " + e.what());
    }
    if (const auto f = s["volume_rule_files"]) {
      if (!f.IsMap()) throw ConfigError(where(source, f) + ": `scheme.volume_rule_files` maps p to a path");
      for (const auto& kv : f)
        cfg.volume_rule_files[get<int>(kv.first, "scheme.volume_rule_files", source)] =
            get<std::string>(kv.second, "scheme.volume_rule_files", source);
    }
  }

  if (const auto m = root["mesh"]) {
    check_keys(m, {"M", "L", "p_map", "warp", "split"}, "mesh", source);
    if (m["M"]) {
      cfg.M = get<int>(m["M"], "mesh.M", source);
      cfg.mesh_size_set = true;
    }
    if (m["L"]) cfg.L = get<double>(m["L"], "mesh.L", source);
    if (m["p_map"]) {
      if (m["p_map"].as<std::string>() == "p")
        cfg.p_map.reset();
      else
        cfg.p_map = get<int>(m["p_map"], "mesh.p_map", source);
    }
    if (m["warp"]) cfg.warp = get<bool>(m["warp"], "mesh.warp", source);
    if (m["split"]) {
      const auto split = get<std::string>(m["split"], "mesh.split", source);
      if (split == "alternating")
        cfg.split = SplitPattern::Alternating;
      else if (split == "uniform")
        cfg.split = SplitPattern::Uniform;
      else
        throw ConfigError(where(source, m["split"]) + ": mesh.split must be alternating or uniform");
    }
  }

  if (const auto a = root["advection"]) {
    check_keys(a, {"velocity"}, "advection", source);
    if (cfg.problem != Problem::Advection) throw ConfigError(where(source, a) + ": `advection` section with problem euler");
    if (a["velocity"]) cfg.velocity = get_vec2(a["velocity"], "advection.velocity", source);
  }

  if (cfg.problem == Problem::Euler) cfg.vortex.center = Vec2(cfg.L / 2, cfg.L / 2);
  if (const auto e = root["euler"]) {
    check_keys(e, {"mach", "gamma", "theta", "epsilon", "center"}, "euler", source);
    if (cfg.problem != Problem::Euler) throw ConfigError(where(source, e) + ": `euler` section with problem advection");
    if (e["mach"]) cfg.vortex.mach = get<double>(e["mach"], "euler.mach", source);
    if (e["gamma"]) cfg.euler.gamma = get<double>(e["gamma"], "euler.gamma", source);
    if (e["theta"]) cfg.vortex.theta = get<double>(e["theta"], "euler.theta", source);
    if (e["epsilon"]) cfg.vortex.epsilon = get<double>(e["epsilon"], "euler.epsilon", source);
    if (e["center"]) cfg.vortex.center = get_vec2(e["center"], "euler.center", source);
  }
  cfg.vortex.L = cfg.L;
  if (cfg.problem == Problem::Euler) cfg.T = std::sqrt(2.0) * cfg.L / cfg.vortex.mach;

  if (const auto t = root["time"]) {
    check_keys(t, {"T", "beta"}, "time", source);
    if (t["T"]) cfg.T = get<double>(t["T"], "time.T", source);
    if (t["beta"]) cfg.beta = get<double>(t["beta"], "time.beta", source);
  }
  if (const auto d = root["diagnostics"]) {
    check_keys(d, {"step_interval"}, "diagnostics", source);
    if (d["step_interval"]) cfg.step_interval = get<int>(d["step_interval"], "diagnostics.step_interval", source);
  }
  if (cfg.problem == Problem::Euler) cfg.lambdas = {1.0};

  validate(cfg);
  return cfg;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.M < 1) throw ConfigError("mesh.M must be at least 1");
  if (!(cfg.L > 0)) throw ConfigError("mesh.L must be positive");
  if (!(cfg.T > 0)) throw ConfigError("time.T must be positive");
  if (!(cfg.beta > 0)) throw ConfigError("time.beta must be positive");
  if (cfg.step_interval < 0) throw ConfigError("diagnostics.step_interval must be nonnegative");
  if (!(cfg.wave_speed() > 0)) throw ConfigError("the characteristic wave speed must be positive");
  if (cfg.problem == Problem::Euler && !(cfg.euler.gamma > 1)) throw ConfigError("euler.gamma must exceed 1");
  if (cfg.weak_form == ResidualForm::StrongFR || cfg.weak_form == ResidualForm::StrongDG)
    throw ConfigError("scheme.weak_form must be a weak residual form");
  if (cfg.strong_form != ResidualForm::StrongFR && cfg.strong_form != ResidualForm::StrongDG)
    throw ConfigError("scheme.strong_form must be strong_fr or strong_dg");
  for (double lam : cfg.lambdas)
    if (lam < 0 || lam > 1) throw ConfigError("scheme.lambda entries must lie in [0, 1]");
  for (int p : cfg.degrees) {
    if (p < 1 || p > 8) throw ConfigError("p = " + std::to_string(p) + " is outside 1..8");
    const int pm = cfg.mapping_degree(p);
    if (pm < 1 || pm > 8) throw ConfigError("mesh.p_map = " + std::to_string(pm) + " is outside 1..8");
    for (const auto& c : cfg.cs) {
      double value;
      try {
        value = c.resolve(p);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (combination p=" + std::to_string(p) + ", c=" + c.label + ")");
      }
      if (value < 0) throw ConfigError("negative VCJH parameter c=" + c.label + " is not supported");
      for (auto f : {cfg.strong_form, cfg.weak_form})
        if (form_requires_dg(f) && value != 0)
          throw ConfigError(to_string(f) + " requires c = 0 (combination p=" + std::to_string(p) +
                            ", c=" + c.label + ")");
    }
  }
}

RunConfig parse_config_string(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return parse_node(root, source);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str(), path);
}

}  // namespace sbpfr
