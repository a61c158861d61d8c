#pragma once

#include "wavecho/flume.hpp"
#include "wavecho/forecaster.hpp"
#include "wavecho/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wavecho {

struct TraceRequest {
  NetworkCode code = parse_code("1111");
  NetworkParams params;
  SeaState sea_state{2.0, 10.0};
};

/// Everything a CLI run needs, validated as a whole before any work starts.
struct RunConfig {
  std::string out_dir = "wavecho_out";
  std::uint64_t seed = 2024;
  int jobs = 1;
  bool desk_scale = true;
  bool force = false;

  std::vector<SeaState> sea_states = paper_sea_states();
  std::vector<NetworkCode> codes = NetworkCode::all();
  ParameterGrid grid;
  FlumeConfig flume = FlumeConfig::desk_scale();
  std::uint64_t flume_seed = 2024;
  ForecastConfig forecast;
  TraceRequest trace;

  void validate() const;
};

/// Flat "key = value" text; '#' starts a comment. Later entries win.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in, const std::string& source = "config");
KeyValues load_key_values(const std::string& path);

/// Keys recognised by build_run_config.
std::vector<std::string> known_keys();

/// Starts from the desk or full preset (key desk_scale), then applies every
/// other key. Unknown keys and malformed values raise Configuration errors.
RunConfig build_run_config(const KeyValues& values);

std::vector<SeaState> parse_sea_states(const std::string& text);  // "0.5:8, 1:10"
std::vector<NetworkCode> parse_codes(const std::string& text);    // "all" or "0001,1111"
std::vector<double> parse_number_list(const std::string& text);

std::string gauge_file_name(const SeaState& s);
std::string scenario_id(const SeaState& s);

struct ManifestRow {
  std::string scenario_id;
  SeaState sea_state;
  std::string path;
};
void write_manifest_csv(std::ostream& out, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest_csv(std::istream& in);

}  // namespace wavecho
