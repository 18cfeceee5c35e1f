#include "sbpfr/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sbpfr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_config(const fs::path& out) {
  RunConfig cfg = parse_config_string(R"(
problem: advection
scheme: {p: [2]}
mesh: {M: 2}
time: {T: 0.02, beta: 0.5}
)");
  cfg.output_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("experiment tables are deterministic") {
  const fs::path dir = fs::temp_directory_path() / "sbpfr_determinism";
  fs::remove_all(dir);
  ExperimentOptions opts;
  const auto a = run_experiments(small_config(dir / "a"), opts);
  const auto b = run_experiments(small_config(dir / "b"), opts);
  REQUIRE(a.tables.size() == 1);
  REQUIRE(b.tables.size() == 1);
  const std::string ta = slurp(a.tables[0]);
  CHECK(ta == slurp(b.tables[0]));
  // 3 variants x 2 c x 2 lambda rows plus the header
  CHECK(std::count(ta.begin(), ta.end(), '\n') == 13);
  CHECK(a.runs.size() == 12);
  CHECK(a.unexpected_instabilities.empty());
  fs::remove_all(dir);
}

TEST_CASE("operator and mesh dumps") {
  const fs::path dir = fs::temp_directory_path() / "sbpfr_dumps";
  fs::remove_all(dir);
  RunConfig cfg = small_config(dir / "out");
  cfg.variants = {Variant::Collocation};
  cfg.cs = {{"c_plus", std::nullopt}};
  cfg.lambdas = {1.0};
  ExperimentOptions opts;
  opts.write_tables = false;
  opts.dump_operators = (dir / "ops").string();
  opts.dump_mesh = (dir / "mesh").string();
  run_experiments(cfg, opts);
  const fs::path ops = dir / "ops" / "p2_collocation_c_plus";
  for (const char* f : {"V.csv", "W.csv", "M.csv", "P.csv", "D1.csv"}) CHECK(fs::exists(ops / f));
  CHECK_FALSE(fs::is_empty(dir / "mesh"));
  CHECK_FALSE(fs::exists(dir / "out" / "advection_p2.csv"));
  fs::remove_all(dir);
}

TEST_CASE("acceptance check flags violations") {
  ExperimentOutcome out;
  out.config = parse_config_string("problem: advection\n");
  RunSummary r;
  r.p = 2;
  r.variant = Variant::QuadratureI;
  r.c_label = "c_dg";
  r.lambda = 1.0;
  r.equivalence = Vec::Constant(1, 1e-3);
  r.drift_strong = r.drift_weak = Vec::Zero(1);
  r.energy_strong = r.energy_weak = -5.847e-3;
  out.runs.push_back(r);
  auto bad = check_acceptance(out);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("equivalence") != std::string::npos);

  out.runs[0].equivalence(0) = 1e-15;
  CHECK(check_acceptance(out).empty());

  // a QuadratureII central-flux run that completes is a violation
  r.variant = Variant::QuadratureII;
  r.lambda = 0.0;
  out.runs.push_back(r);
  CHECK(check_acceptance(out).size() == 1);
}
