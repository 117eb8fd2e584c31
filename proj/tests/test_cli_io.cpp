#include "gtensor/config.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gtensor;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gtensor_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config defaults and validation") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.ipf_tolerance = 0;
  CHECK_THROWS(validate(c));
  c = RunConfig{};
  c.treewidth_vertex_limit = 0;
  CHECK_THROWS(validate(c));
}

TEST_CASE("config json round trip") {
  RunConfig c;
  c.sweep_grid = 321;
  c.format = OutputFormat::Json;
  c.threads = 3;
  c.search.mixed_edge_limit = 9;
  RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  Json bad = config_to_json(c);
  bad["unknown_key"] = 1;
  CHECK_THROWS(config_from_json(bad));
  Json neg = config_to_json(c);
  neg["sweep_grid"] = 0;
  CHECK_THROWS(config_from_json(neg));
}

TEST_CASE("config files, relative table paths and the environment override") {
  fs::path dir = scratch("cfg");
  {
    std::ofstream t(dir / "table.txt");
    t << "omega 1 2.4\nomega 1/2 2.05\ntau 4 0.8\n";
    std::ofstream j(dir / "run.json");
    j << R"({"omega_table": "table.txt", "sweep_grid": 50})";
  }
  RunConfig c = load_config((dir / "run.json").string());
  CHECK(c.sweep_grid == 50);
  CHECK(fs::path(c.omega_table_path) == dir / "table.txt");
  OmegaTable t = load_omega_table(c);
  CHECK(t.omega1() == parse_rational("2.4"));
  CHECK(load_omega_table(RunConfig{}).omega1() == OmegaTable::defaults().omega1());

  setenv(kConfigEnvVar, (dir / "run.json").string().c_str(), 1);
  CHECK(resolve_config("").sweep_grid == 50);
  unsetenv(kConfigEnvVar);
  CHECK(resolve_config("").sweep_grid == RunConfig{}.sweep_grid);
  CHECK_THROWS(load_config((dir / "missing.json").string()));
}

TEST_CASE("reports round trip and persist") {
  DerivationReport r;
  r.command = "bound";
  r.inputs = {{"d", 5}};
  auto b = star_sum_bound(5, StarMethod::Treewidth, OmegaTable::defaults());
  r.results = {{"bound", rational_json(b.value)}, {"derivation", derivation_json(b.derivation)}};
  r.omega_table = omega_table_json(OmegaTable::defaults());
  r.seconds = 0.5;
  Json j = r.to_json();
  CHECK(j["schema"] == kReportSchema);
  DerivationReport back = DerivationReport::from_json(j);
  CHECK(back.payload() == r.payload());
  back.seconds = 9;
  CHECK(back.payload() == r.payload());
  CHECK(Json::parse(j.dump()) == j);
  CHECK(rational_json(Rational(16, 5))["exact"] == "16/5");

  std::ostringstream text;
  write_report(text, r, OutputFormat::Text);
  CHECK(text.str().find("bound") != std::string::npos);
  std::ostringstream js;
  write_report(js, r, OutputFormat::Json);
  CHECK(DerivationReport::from_json(Json::parse(js.str())).payload() == r.payload());

  fs::path dir = scratch("reports");
  RunConfig c;
  c.output_dir = dir.string();
  persist_report(c, r);
  std::ifstream in(dir / "bound.json");
  REQUIRE(in);
  CHECK(DerivationReport::from_json(Json::parse(in)).payload() == r.payload());
}
