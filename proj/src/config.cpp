#include "wavecho/config.hpp"

#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

namespace wavecho {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Configuration, what); }

double number(const std::string& key, const std::string& v) {
  try {
    return csv::parse_number(csv::trim(v));
  } catch (const std::exception&) {
    bad(key + ": expected a number, got '" + v + "'");
  }
}

long long integer(const std::string& key, const std::string& v) {
  try {
    return csv::parse_integer(csv::trim(v));
  } catch (const std::exception&) {
    bad(key + ": expected an integer, got '" + v + "'");
  }
}

bool boolean(const std::string& key, const std::string& v) {
  const auto t = std::string(csv::trim(v));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad(key + ": expected true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = number(k, v);
      };
    };
    auto flag = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = boolean(k, v);
      };
    };

    t["out_dir"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.out_dir = std::string(csv::trim(v));
      if (c.out_dir.empty()) bad(k + " must not be empty");
    };
    t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.seed = static_cast<std::uint64_t>(integer(k, v));
      c.flume_seed = c.seed;
    };
    t["jobs"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.jobs = static_cast<int>(integer(k, v));
    };
    t["desk_scale"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.desk_scale = boolean(k, v);
    };
    t["force"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.force = boolean(k, v);
    };
    t["sea_states"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.sea_states = parse_sea_states(v);
    };
    t["codes"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.codes = parse_codes(v);
    };
    t["grid.alpha"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.grid.alpha = parse_number_list(v);
    };
    t["grid.rho"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.grid.rho = parse_number_list(v);
    };
    t["grid.beta"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.grid.beta = parse_number_list(v);
    };

    t["flume.cells"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.flume.cells = static_cast<int>(integer(k, v));
    };
    t["flume.sponge_cells"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.flume.sponge_cells = static_cast<int>(integer(k, v));
    };
    t["flume.seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.flume_seed = static_cast<std::uint64_t>(integer(k, v));
    };
    num("flume.length", [](RunConfig& c) -> double& { return c.flume.length; });
    num("flume.offshore_depth", [](RunConfig& c) -> double& { return c.flume.offshore_depth; });
    num("flume.shelf_depth", [](RunConfig& c) -> double& { return c.flume.shelf_depth; });
    num("flume.slope", [](RunConfig& c) -> double& { return c.flume.slope; });
    num("flume.slope_toe", [](RunConfig& c) -> double& { return c.flume.slope_toe; });
    num("flume.wavemaker_center", [](RunConfig& c) -> double& { return c.flume.wavemaker_center; });
    num("flume.sponge_strength", [](RunConfig& c) -> double& { return c.flume.sponge_strength; });
    num("flume.gauge_x", [](RunConfig& c) -> double& { return c.flume.gauge_x; });
    num("flume.courant", [](RunConfig& c) -> double& { return c.flume.courant; });
    num("flume.manning_n", [](RunConfig& c) -> double& { return c.flume.manning_n; });
    num("flume.z_alpha_coeff", [](RunConfig& c) -> double& { return c.flume.z_alpha_coeff; });
    num("flume.duration", [](RunConfig& c) -> double& { return c.flume.duration; });
    num("flume.record_start", [](RunConfig& c) -> double& { return c.flume.record_start; });
    num("flume.output_rate", [](RunConfig& c) -> double& { return c.flume.output_rate; });
    flag("flume.breaking", [](RunConfig& c) -> bool& { return c.flume.breaking; });
    flag("flume.dispersion", [](RunConfig& c) -> bool& { return c.flume.dispersion; });
    flag("flume.friction", [](RunConfig& c) -> bool& { return c.flume.friction; });

    num("forecast.training_duration",
        [](RunConfig& c) -> double& { return c.forecast.training_duration; });
    num("forecast.evaluation_duration",
        [](RunConfig& c) -> double& { return c.forecast.evaluation_duration; });
    num("forecast.sample_rate", [](RunConfig& c) -> double& { return c.forecast.sample_rate; });
    num("forecast.ridge", [](RunConfig& c) -> double& { return c.forecast.ridge; });
    num("forecast.divergence_factor",
        [](RunConfig& c) -> double& { return c.forecast.divergence_factor; });
    flag("forecast.online_updates", [](RunConfig& c) -> bool& { return c.forecast.online_updates; });
    t["forecast.horizon"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      if (csv::trim(v) == "auto") {
        c.forecast.horizon.reset();
      } else {
        c.forecast.horizon = number(k, v);
      }
    };
    t["forecast.trough_stride"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.forecast.trough_stride = static_cast<int>(integer(k, v));
    };
    t["forecast.washout"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.forecast.washout = static_cast<int>(integer(k, v));
    };
    t["forecast.window"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.forecast.window = static_cast<int>(integer(k, v));
    };

    t["trace.code"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      try {
        c.trace.code = parse_code(csv::trim(v));
      } catch (const Error& e) {
        bad(k + ": " + e.what());
      }
    };
    num("trace.alpha", [](RunConfig& c) -> double& { return c.trace.params.alpha; });
    num("trace.rho", [](RunConfig& c) -> double& { return c.trace.params.rho; });
    num("trace.beta", [](RunConfig& c) -> double& { return c.trace.params.beta; });
    num("trace.hs", [](RunConfig& c) -> double& { return c.trace.sea_state.hs; });
    num("trace.tp", [](RunConfig& c) -> double& { return c.trace.sea_state.tp; });
    return t;
  }();
  return table;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  std::string line;
  int number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = csv::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      bad(source + ":" + std::to_string(number_of_line) + ": expected key = value");
    }
    const auto key = std::string(csv::trim(body.substr(0, eq)));
    if (key.empty()) bad(source + ":" + std::to_string(number_of_line) + ": empty key");
    out[key] = std::string(csv::trim(body.substr(eq + 1)));
  }
  return out;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path);
  return parse_key_values(in, path);
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

RunConfig build_run_config(const KeyValues& values) {
  for (const auto& [k, _] : values) {
    if (!setters().count(k)) bad("unknown config key '" + k + "'");
  }
  RunConfig c;
  if (auto it = values.find("desk_scale"); it != values.end()) {
    c.desk_scale = boolean(it->first, it->second);
  }
  if (c.desk_scale) {
    c.flume = FlumeConfig::desk_scale();
    c.forecast = ForecastConfig{};
  } else {
    c.flume = FlumeConfig{};
    c.forecast = ForecastConfig::full_scale();
  }
  // The master seed goes first so an explicit flume.seed can override it.
  if (auto it = values.find("seed"); it != values.end()) setters().at("seed")(c, it->first, it->second);
  for (const auto& [k, v] : values) {
    if (k == "desk_scale" || k == "seed") continue;
    setters().at(k)(c, k, v);
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (out_dir.empty()) bad("out_dir must not be empty");
  if (jobs < 1) bad("jobs must be at least 1");
  for (const auto& s : sea_states) {
    if (!(s.hs >= 0.0) || !(s.tp > 0.0)) {
      throw Error(ErrorKind::InvalidSeaState, "sea state needs Hs >= 0 and Tp > 0");
    }
  }
  for (const auto* list : {&grid.alpha, &grid.rho, &grid.beta}) {
    if (list->empty()) bad("parameter grids must not be empty");
  }
  for (double a : grid.alpha) {
    if (!(a > 0.0)) bad("alpha values must be positive");
  }
  for (double r : grid.rho) {
    if (!(r >= 0.0)) bad("rho values must be non-negative");
  }
  for (double b : grid.beta) {
    if (!(b >= 0.0)) bad("beta values must be non-negative");
  }
  flume.validate();
  forecast.validate();
  if (std::abs(flume.output_rate - forecast.sample_rate) > 1e-12 * forecast.sample_rate) {
    bad("flume.output_rate and forecast.sample_rate differ");
  }
  const double recorded = flume.duration - flume.record_start;
  if (recorded + 1e-9 < forecast.training_duration + forecast.evaluation_duration) {
    bad("flume records " + csv::format_number(recorded) + " s but forecasting needs " +
        csv::format_number(forecast.training_duration + forecast.evaluation_duration) + " s");
  }
  if (!(trace.params.alpha > 0.0) || trace.params.rho < 0.0 || trace.params.beta < 0.0) {
    bad("trace parameters out of range");
  }
  if (!(trace.sea_state.tp > 0.0) || trace.sea_state.hs < 0.0) {
    throw Error(ErrorKind::InvalidSeaState, "trace sea state needs Hs >= 0 and Tp > 0");
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (auto f : csv::split(text, ',')) {
    const auto t = csv::trim(f);
    if (t.empty()) continue;
    out.push_back(number("list", std::string(t)));
  }
  return out;
}

std::vector<SeaState> parse_sea_states(const std::string& text) {
  std::vector<SeaState> out;
  for (auto f : csv::split(text, ',')) {
    const auto t = csv::trim(f);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) bad("sea state '" + std::string(t) + "' is not Hs:Tp");
    out.push_back({number("sea_states", std::string(t.substr(0, colon))),
                   number("sea_states", std::string(t.substr(colon + 1)))});
  }
  return out;
}

std::vector<NetworkCode> parse_codes(const std::string& text) {
  if (csv::trim(text) == "all") return NetworkCode::all();
  std::vector<NetworkCode> out;
  for (auto f : csv::split(text, ',')) {
    const auto t = csv::trim(f);
    if (t.empty()) continue;
    try {
      out.push_back(parse_code(t));
    } catch (const Error& e) {
      bad(std::string("codes: ") + e.what());
    }
  }
  return out;
}

std::string scenario_id(const SeaState& s) {
  return "Hs" + csv::format_number(s.hs) + "_Tp" + csv::format_number(s.tp);
}

std::string gauge_file_name(const SeaState& s) { return "gauge_" + scenario_id(s) + ".csv"; }

void write_manifest_csv(std::ostream& out, const std::vector<ManifestRow>& rows) {
  out << "scenario_id,Hs,Tp,path\n";
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << csv::format_number(r.sea_state.hs) << ','
        << csv::format_number(r.sea_state.tp) << ',' << r.path << '\n';
  }
}

std::vector<ManifestRow> read_manifest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::trim(line) != "scenario_id,Hs,Tp,path") {
    throw Error(ErrorKind::Io, "manifest header missing");
  }
  std::vector<ManifestRow> rows;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto f = csv::split(line, ',');
    if (f.size() != 4) throw Error(ErrorKind::Io, "malformed manifest row: " + line);
    rows.push_back({std::string(csv::trim(f[0])),
                    {csv::parse_number(csv::trim(f[1])), csv::parse_number(csv::trim(f[2]))},
                    std::string(csv::trim(f[3]))});
  }
  return rows;
}

}  // namespace wavecho
