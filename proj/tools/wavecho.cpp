#include "../tests/acceptance/criteria.hpp"
#include "wavecho/config.hpp"
#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"
#include "wavecho/flume.hpp"
#include "wavecho/forecaster.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace wavecho;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  bool force = false;
  bool desk_scale = false;
  bool full_scale = false;
  bool verify_full = false;
};

RunConfig resolve(const Options& o) {
  KeyValues kv;
  if (!o.config_path.empty()) kv = load_key_values(o.config_path);
  if (const char* env = std::getenv("WAVECHO_OUT"); env && *env) kv["out_dir"] = env;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Usage, "--set expects key=value, got " + s);
    std::istringstream line(s);
    for (const auto& [k, v] : parse_key_values(line, "--set")) kv[k] = v;
  }
  if (o.seed) kv["seed"] = std::to_string(*o.seed);
  if (o.out) kv["out_dir"] = *o.out;
  if (o.jobs) kv["jobs"] = std::to_string(*o.jobs);
  if (o.force) kv["force"] = "true";
  if (o.desk_scale && o.full_scale) {
    throw Error(ErrorKind::Usage, "--desk-scale and --full-scale are exclusive");
  }
  if (o.desk_scale) kv["desk_scale"] = "true";
  if (o.full_scale) kv["desk_scale"] = "false";
  return build_run_config(kv);
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = dir / ".write_probe";
  std::ofstream out(probe);
  if (ec || !out) throw Error(ErrorKind::Io, "output directory " + dir.string() + " is not writable");
  out.close();
  fs::remove(probe, ec);
}

// Whole-file replace so readers never see a partial file.
template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    writer(out);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path gauge_dir(const RunConfig& c) { return fs::path(c.out_dir) / "gauges"; }

GaugeSeries load_gauge_for(const RunConfig& c, const SeaState& s) {
  const fs::path path = gauge_dir(c) / gauge_file_name(s);
  if (!fs::exists(path)) {
    throw Error(ErrorKind::Io, "missing gauge file " + path.string() +
                                   "; run `wavecho synthesize` with the same config and output "
                                   "directory first");
  }
  return load_gauge_csv(path.string());
}

int cmd_synthesize(const RunConfig& c) {
  if (c.sea_states.empty()) {
    throw Error(ErrorKind::Usage, "no sea states requested (set sea_states = Hs:Tp, ...)");
  }
  ensure_writable(gauge_dir(c));

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < c.sea_states.size(); ++i) {
    const fs::path path = gauge_dir(c) / gauge_file_name(c.sea_states[i]);
    if (fs::exists(path) && !c.force) {
      std::cerr << "skip " << scenario_id(c.sea_states[i]) << " (exists)\n";
    } else {
      pending.push_back(i);
    }
  }

  std::vector<std::string> failures(c.sea_states.size());
  std::atomic<std::size_t> next{0};
  std::mutex log;
  auto worker = [&] {
    for (std::size_t j = next++; j < pending.size(); j = next++) {
      const SeaState& s = c.sea_states[pending[j]];
      try {
        const GaugeSeries g = run_scenario(s.hs, s.tp, c.flume, c.flume_seed);
        write_file(gauge_dir(c) / gauge_file_name(s),
                   [&](std::ostream& out) { write_gauge_csv(out, g); });
        std::lock_guard lock(log);
        std::cerr << "done " << scenario_id(s) << " (" << g.size() << " samples)\n";
      } catch (const std::exception& e) {
        failures[pending[j]] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(c.jobs, static_cast<int>(pending.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<ManifestRow> rows;
  int failed = 0;
  for (std::size_t i = 0; i < c.sea_states.size(); ++i) {
    if (!failures[i].empty()) {
      std::cerr << "failed " << scenario_id(c.sea_states[i]) << ": " << failures[i] << '\n';
      ++failed;
      continue;
    }
    rows.push_back({scenario_id(c.sea_states[i]), c.sea_states[i],
                    (fs::path("gauges") / gauge_file_name(c.sea_states[i])).string()});
  }
  write_file(fs::path(c.out_dir) / "manifest.csv",
             [&](std::ostream& out) { write_manifest_csv(out, rows); });
  std::cout << "wrote " << rows.size() << " gauge series, manifest "
            << (fs::path(c.out_dir) / "manifest.csv").string() << '\n';
  return failed == 0 ? 0 : 1;
}

int cmd_sweep(const RunConfig& c) {
  if (c.sea_states.empty() || c.codes.empty()) {
    throw Error(ErrorKind::Usage, "sweep needs at least one sea state and one code");
  }
  std::vector<GaugeSeries> series;
  for (const auto& s : c.sea_states) series.push_back(load_gauge_for(c, s));
  ensure_writable(c.out_dir);

  const auto reports = sweep(c.codes, c.sea_states, series, c.grid, c.seed, c.forecast, c.jobs);
  const auto summary = summarize(reports, c.seed);
  write_file(fs::path(c.out_dir) / "report.csv",
             [&](std::ostream& out) { write_report_csv(out, reports); });
  write_file(fs::path(c.out_dir) / "summary.csv",
             [&](std::ostream& out) { write_summary_csv(out, summary); });

  int failed = 0;
  for (const auto& r : reports) {
    if (r.error.empty()) continue;
    ++failed;
    std::cerr << "failed " << RunKey{r.code, r.sea_state, r.params}.str() << ": " << r.error << '\n';
  }
  for (const auto& row : summary) {
    std::printf("%s Hs=%g Tp=%g median RMS %.4g m [%.4g, %.4g], IQR %.4g m, %zu/%zu diverged\n",
                row.code.str().c_str(), row.sea_state.hs, row.sea_state.tp, row.median,
                row.ci_low, row.ci_high, row.iqr(), row.diverged, row.runs);
  }
  std::cout << "wrote " << reports.size() << " report rows to "
            << (fs::path(c.out_dir) / "report.csv").string() << '\n';
  return failed == 0 ? 0 : 1;
}

int cmd_trace(const RunConfig& c) {
  const GaugeSeries series = load_gauge_for(c, c.trace.sea_state);
  ensure_writable(c.out_dir);
  const RunKey key{c.trace.code, c.trace.sea_state, c.trace.params};
  const PredictionReport report =
      evaluate(series, key.code, key.params, run_seed(c.seed, key), c.forecast);
  std::string name = "trace_" + key.code.str() + "_" + scenario_id(key.sea_state) + "_a" +
                     csv::format_number(key.params.alpha) + "_r" +
                     csv::format_number(key.params.rho) + "_b" +
                     csv::format_number(key.params.beta) + ".csv";
  const fs::path path = fs::path(c.out_dir) / name;
  write_file(path, [&](std::ostream& out) { write_trace_csv(out, series, report); });
  std::printf("%s rms %.4g m over %zu segments%s; wrote %s\n", key.str().c_str(), report.rms,
              report.n_segments(), report.diverged ? " (diverged)" : "", path.string().c_str());
  return 0;
}

int cmd_verify(const RunConfig& c, bool full) {
  std::vector<acceptance::Result> results = {
      acceptance::readout_oracle(),        acceptance::spectral_oracle(),
      acceptance::reservoir_equivalence(), acceptance::topology_scaling(),
      acceptance::flume_balance(),         acceptance::flume_dispersion(),
      acceptance::spectrum_bookkeeping()};
  if (full) {
    for (auto& r : acceptance::sweep_criteria((fs::path(c.out_dir) / "verify").string(), c.jobs)) {
      results.push_back(r);
    }
  }
  int failed = 0;
  for (const auto& r : results) {
    std::cout << acceptance::format(r) << '\n';
    if (!r.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reservoir-computing wave forecasting toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  app.add_option("--set", o.sets, "Config override key=value (repeatable)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--out", o.out, "Output directory (overrides WAVECHO_OUT)");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--force", o.force, "Recompute existing gauge files");
  app.add_flag("--desk-scale", o.desk_scale, "Short scenario and evaluation spans (default)");
  app.add_flag("--full-scale", o.full_scale, "2 h scenarios and 1.5 h evaluation");

  auto* synth = app.add_subcommand("synthesize", "Run the flume for every sea state");
  auto* sw = app.add_subcommand("sweep", "Evaluate codes x sea states x parameter grid");
  auto* tr = app.add_subcommand("trace", "Write the trace of one forecasting run");
  auto* ver = app.add_subcommand("verify", "Run the oracle and property checks");
  ver->add_flag("--full", o.verify_full, "Include the sweep-based checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const RunConfig config = resolve(o);
    if (*synth) return cmd_synthesize(config);
    if (*sw) return cmd_sweep(config);
    if (*tr) return cmd_trace(config);
    if (*ver) return cmd_verify(config, o.verify_full);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Usage || e.kind() == ErrorKind::Configuration ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
