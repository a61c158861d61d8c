#include "helpers.hpp"
#include "wavecho/config.hpp"

#include <doctest.h>

#include <sstream>

using namespace wavecho;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in);
}

}  // namespace

TEST_CASE("key-value parsing") {
  const KeyValues kv = parse("# comment\nseed = 5\n\n  out_dir=/tmp/x  # trailing\nseed=6\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("seed") == "6");
  CHECK(kv.at("out_dir") == "/tmp/x");
  CHECK(error_kind([] { parse("no equals sign\n"); }) == ErrorKind::Configuration);
}

TEST_CASE("defaults are the desk preset over the headline sweep") {
  const RunConfig c = build_run_config({});
  CHECK(c.desk_scale);
  CHECK(c.seed == 2024);
  CHECK(c.codes.size() == 16);
  CHECK(c.sea_states.size() == 5);
  CHECK(c.grid.size() == 125);
  CHECK(c.flume.duration == 2000.0);
  CHECK(c.forecast.evaluation_duration == 600.0);
  CHECK_NOTHROW(c.validate());

  const RunConfig full = build_run_config({{"desk_scale", "false"}});
  CHECK(full.flume.duration == 7200.0);
  CHECK(full.forecast.evaluation_duration == 5400.0);
  CHECK_NOTHROW(full.validate());
}

TEST_CASE("keys are applied and unknown keys rejected") {
  const RunConfig c = build_run_config({{"seed", "77"},
                                        {"jobs", "3"},
                                        {"codes", "1111, 0001"},
                                        {"sea_states", "2:10, 0.5:8"},
                                        {"grid.alpha", "0.5"},
                                        {"forecast.horizon", "30"},
                                        {"trace.code", "0110"},
                                        {"flume.breaking", "false"}});
  CHECK(c.seed == 77);
  CHECK(c.flume_seed == 77);
  CHECK(c.jobs == 3);
  CHECK(c.codes == std::vector<NetworkCode>{parse_code("1111"), parse_code("0001")});
  CHECK(c.sea_states == std::vector<SeaState>{{2, 10}, {0.5, 8}});
  CHECK(c.grid.size() == 25);
  CHECK(c.forecast.horizon == 30.0);
  CHECK(c.trace.code == parse_code("0110"));
  CHECK_FALSE(c.flume.breaking);
  CHECK_FALSE(build_run_config({{"forecast.horizon", "auto"}}).forecast.horizon.has_value());
  CHECK(build_run_config({{"seed", "1"}, {"flume.seed", "9"}}).flume_seed == 9);

  CHECK(error_kind([] { build_run_config({{"sead", "1"}}); }) == ErrorKind::Configuration);
  CHECK(error_kind([] { build_run_config({{"jobs", "many"}}); }) == ErrorKind::Configuration);
  CHECK(error_kind([] { build_run_config({{"codes", "0121"}}); }) == ErrorKind::Configuration);
  CHECK(error_kind([] { build_run_config({{"sea_states", "2-10"}}); }) == ErrorKind::Configuration);
  CHECK(error_kind([] { build_run_config({{"grid.rho", ""}}); }) == ErrorKind::Configuration);
  for (const auto& k : known_keys()) CHECK(k.find(' ') == std::string::npos);
}

TEST_CASE("whole-config validation before any work") {
  // Recorded span shorter than training plus evaluation.
  CHECK(error_kind([] { build_run_config({{"flume.record_start", "1000"}}); }) ==
        ErrorKind::Configuration);
  CHECK(error_kind([] { build_run_config({{"forecast.sample_rate", "2"}}); }) ==
        ErrorKind::Configuration);
  CHECK(error_kind([] { build_run_config({{"flume.cells", "0"}}); }) == ErrorKind::Configuration);
  CHECK(build_run_config({{"sea_states", ""}}).sea_states.empty());
}

TEST_CASE("file naming and manifest") {
  const SeaState s{0.5, 8};
  CHECK(scenario_id(s) == "Hs0.5_Tp8");
  CHECK(gauge_file_name(s) == "gauge_Hs0.5_Tp8.csv");

  const std::vector<ManifestRow> rows{{"Hs0.5_Tp8", {0.5, 8}, "gauges/gauge_Hs0.5_Tp8.csv"},
                                      {"Hs2_Tp10", {2, 10}, "gauges/gauge_Hs2_Tp10.csv"}};
  std::stringstream ss;
  write_manifest_csv(ss, rows);
  CHECK(ss.str().rfind("scenario_id,Hs,Tp,path\n", 0) == 0);
  const auto back = read_manifest_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].scenario_id == "Hs2_Tp10");
  CHECK(back[1].sea_state == SeaState{2, 10});
  CHECK(back[0].path == rows[0].path);
}
