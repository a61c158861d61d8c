#include "wavecho/forecaster.hpp"

#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"
#include "wavecho/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace wavecho {

namespace {

constexpr std::uint64_t kStreamConnectivity = 0xC0;
constexpr std::uint64_t kStreamReservoir = 0xB1;
constexpr std::uint64_t kStreamBootstrap = 0xB0;

std::size_t samples_for(double seconds, double rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

bool finite_vector(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

void ForecastConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Configuration, what); };
  if (!(training_duration > 0.0)) fail("training_duration must be positive");
  if (!(evaluation_duration > 0.0)) fail("evaluation_duration must be positive");
  if (trough_stride < 1) fail("trough_stride must be at least 1");
  if (horizon && !(*horizon > 0.0)) fail("horizon must be positive");
  if (!(sample_rate > 0.0)) fail("sample_rate must be positive");
  if (washout < 0) fail("washout must be non-negative");
  if (samples_for(training_duration, sample_rate) <= static_cast<std::size_t>(washout) + 1) {
    fail("training span shorter than the washout");
  }
  if (!(ridge > 0.0)) throw Error(ErrorKind::InvalidRegularizer, "ridge must be positive");
  if (!(divergence_factor > 0.0)) fail("divergence_factor must be positive");
  if (window < 2) fail("window must be at least 2");
}

ForecastConfig ForecastConfig::full_scale() {
  ForecastConfig c;
  c.evaluation_duration = 5400.0;
  return c;
}

std::vector<SeaState> paper_sea_states() {
  return {{0.5, 8.0}, {1.0, 8.0}, {1.0, 10.0}, {1.0, 12.0}, {2.0, 10.0}};
}

std::vector<double> paper_parameter_values() { return {0.1, 0.3, 0.5, 0.7, 0.9}; }

std::vector<std::size_t> detect_troughs(const std::vector<double>& eta) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < eta.size(); ++i) {
    if (eta[i] < eta[i - 1] && eta[i] <= eta[i + 1] && eta[i] < 0.0) out.push_back(i);
  }
  return out;
}

// --- frontend ------------------------------------------------------------------

Frontend::Frontend(bool spectral, int window) : spectral_(spectral), frame_(window) {}

Eigen::VectorXd Frontend::push(double sample) {
  if (!spectral_) return Eigen::VectorXd::Constant(1, sample);
  frame_.push(sample);
  return split_to_input(frame_);
}

double Frontend::decode(const Eigen::Ref<const Eigen::VectorXd>& output) const {
  if (!spectral_) return output(0);
  return newest_sample(merge_split(output));
}

// --- model -------------------------------------------------------------------

TrainedModel make_model(const NetworkCode& code, const NetworkParams& params, std::uint64_t seed,
                        const ForecastConfig& config) {
  config.validate();
  ReservoirParams rp;
  rp.alpha = params.alpha;
  rp.rho = params.rho;
  rp.beta_max = params.beta;
  rp.dt = 1.0 / config.sample_rate;
  rp.seed = derive_seed(seed, kStreamReservoir);
  rp.validate();

  Connectivity conn = build_connectivity(code, derive_seed(seed, kStreamConnectivity), rp.tau_m(),
                                         config.window);
  ReservoirState state = initial_state(conn, rp);
  Frontend frontend(code.spectral_input(), config.window);
  ReadoutState readout = ReadoutState::make(conn.units(), frontend.input_dim(), config.ridge);
  Eigen::MatrixXd weights = readout.R;
  return TrainedModel{std::move(conn), rp,     std::move(state), std::move(frontend),
                      std::move(readout), std::move(weights), 0, static_cast<std::size_t>(config.washout)};
}

void observe(TrainedModel& model, double sample, bool learn) {
  if (!std::isfinite(sample)) throw Error(ErrorKind::NumericInput, "non-finite observation");
  const Eigen::VectorXd s = model.frontend.push(sample);
  // The state after the previous sample is regressed onto this input.
  if (learn && model.consumed >= std::max<std::size_t>(1, model.washout)) {
    rls_update(model.readout, model.state.x, s);
  }
  step(model.state, s, model.conn, model.params);
  ++model.consumed;
}

double predict_next(const TrainedModel& model) {
  return model.frontend.decode(predict_output(model.active_weights, model.state.x));
}

TrainedModel train(const GaugeSeries& series, const NetworkCode& code, const NetworkParams& params,
                   std::uint64_t seed, const ForecastConfig& config) {
  const std::size_t n = samples_for(config.training_duration, config.sample_rate);
  if (series.size() < n) {
    throw Error(ErrorKind::InsufficientData, "series has " + std::to_string(series.size()) +
                                                 " samples, training needs " + std::to_string(n));
  }
  TrainedModel model = make_model(code, params, seed, config);
  for (std::size_t t = 0; t < n; ++t) observe(model, series.eta[t], true);
  refresh_weights(model.readout);
  model.active_weights = model.readout.R;
  return model;
}

std::vector<double> free_run(const TrainedModel& model, std::size_t steps, double limit) {
  std::vector<double> out;
  if (steps == 0) return out;
  out.reserve(steps);
  ReservoirState state = model.state;
  Frontend frontend = model.frontend;
  for (std::size_t j = 0; j < steps; ++j) {
    const Eigen::VectorXd y = predict_output(model.active_weights, state.x);
    if (!finite_vector(y)) break;
    double sample = 0.0;
    try {
      sample = frontend.decode(y);
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(sample) || std::abs(sample) > limit) break;
    out.push_back(sample);
    if (j + 1 == steps) break;
    const Eigen::VectorXd s = frontend.push(sample);
    step(state, s, model.conn, model.params);
  }
  return out;
}

// --- evaluation -----------------------------------------------------------------

double rms_error(const std::vector<double>& prediction, const std::vector<double>& truth) {
  if (prediction.size() != truth.size()) throw Error(ErrorKind::Shape, "trace lengths differ");
  if (truth.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = prediction[i] - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

PredictionReport evaluate(const GaugeSeries& series, const NetworkCode& code,
                          const NetworkParams& params, std::uint64_t seed,
                          const ForecastConfig& config) {
  config.validate();
  const double rate = config.sample_rate;
  if (std::abs(series.sample_rate - rate) > 1e-12 * rate) {
    throw Error(ErrorKind::Configuration, "series sample rate differs from the forecast rate");
  }
  const std::size_t n_train = samples_for(config.training_duration, rate);
  const std::size_t n_eval = samples_for(config.evaluation_duration, rate);
  if (series.size() < n_train + n_eval) {
    throw Error(ErrorKind::InsufficientData,
                "series has " + std::to_string(series.size()) + " samples, run needs " +
                    std::to_string(n_train + n_eval));
  }
  const double horizon_s = config.horizon.value_or(2.0 * series.tp);
  const auto horizon = std::max<std::size_t>(1, samples_for(horizon_s, rate));
  const double limit = series.hs > 0.0 ? config.divergence_factor * series.hs
                                       : std::numeric_limits<double>::infinity();

  PredictionReport report;
  report.code = code;
  report.params = params;
  report.sea_state = {series.hs, series.tp};
  report.sample_rate = rate;
  report.start_time = static_cast<double>(n_train) / rate;

  // Training with the one-step output recorded for the trace.
  TrainedModel model = make_model(code, params, seed, config);
  report.training_fit.reserve(n_train);
  for (std::size_t t = 0; t < n_train; ++t) {
    report.training_fit.push_back(
        t == 0 ? 0.0 : model.frontend.decode(predict_output(model.readout.R, model.state.x)));
    observe(model, series.eta[t], true);
  }
  refresh_weights(model.readout);
  model.active_weights = model.readout.R;

  report.truth.assign(series.eta.begin() + static_cast<std::ptrdiff_t>(n_train),
                      series.eta.begin() + static_cast<std::ptrdiff_t>(n_train + n_eval));
  report.prediction.assign(n_eval, std::numeric_limits<double>::quiet_NaN());

  // Anchors just after every stride-th trough, where the trough has been seen.
  std::vector<bool> refresh_at(n_eval + 1, false);
  {
    const auto troughs = detect_troughs(series.eta);
    std::size_t count = 0;
    for (std::size_t tr : troughs) {
      if (tr < n_train) continue;
      const std::size_t anchor = tr + 2 - n_train;
      if (anchor >= n_eval) break;
      if (++count % static_cast<std::size_t>(config.trough_stride) == 0) refresh_at[anchor] = true;
    }
  }

  std::size_t j = 0;
  while (j < n_eval) {
    Segment seg;
    seg.start = j;
    std::size_t end = std::min(n_eval, j + horizon);
    for (std::size_t k = j + 1; k < end; ++k) {
      if (refresh_at[k]) {
        end = k;
        break;
      }
    }
    seg.length = end - j;
    if (refresh_at[j] && config.online_updates) {
      refresh_weights(model.readout);
      model.active_weights = model.readout.R;
      seg.refreshed = true;
    }
    const std::vector<double> pred = free_run(model, seg.length, limit);
    std::copy(pred.begin(), pred.end(), report.prediction.begin() + static_cast<std::ptrdiff_t>(j));
    if (pred.size() < seg.length) {
      report.diverged = true;
      seg.rms = std::numeric_limits<double>::infinity();
      report.segments.push_back(seg);
      break;
    }
    double sum = 0.0;
    for (std::size_t k = j; k < end; ++k) {
      const double d = report.prediction[k] - report.truth[k];
      sum += d * d;
    }
    seg.rms = std::sqrt(sum / static_cast<double>(seg.length));
    report.segments.push_back(seg);

    for (std::size_t k = j; k < end; ++k) {
      observe(model, series.eta[n_train + k], config.online_updates);
    }
    j = end;
  }

  report.rms = report.diverged ? std::numeric_limits<double>::infinity()
                               : rms_error(report.prediction, report.truth);
  return report;
}

// --- sweeps ----------------------------------------------------------------------

std::string RunKey::str() const {
  std::ostringstream os;
  os << code.str() << "/Hs=" << csv::format_number(sea_state.hs)
     << "/Tp=" << csv::format_number(sea_state.tp) << "/alpha=" << csv::format_number(params.alpha)
     << "/rho=" << csv::format_number(params.rho) << "/beta=" << csv::format_number(params.beta);
  return os.str();
}

bool RunKey::operator<(const RunKey& o) const {
  const std::string a = code.str();
  const std::string b = o.code.str();
  return std::tie(a, sea_state.hs, sea_state.tp, params.alpha, params.rho, params.beta) <
         std::tie(b, o.sea_state.hs, o.sea_state.tp, o.params.alpha, o.params.rho, o.params.beta);
}

std::uint64_t run_seed(std::uint64_t master_seed, const RunKey& key) {
  return derive_seed(master_seed, stable_hash(key.str()));
}

std::vector<PredictionReport> sweep(const std::vector<NetworkCode>& codes,
                                    const std::vector<SeaState>& sea_states,
                                    const std::vector<GaugeSeries>& series,
                                    const ParameterGrid& grid, std::uint64_t master_seed,
                                    const ForecastConfig& config, int jobs) {
  if (codes.empty() || sea_states.empty() || grid.size() == 0) {
    throw Error(ErrorKind::Usage, "sweep needs at least one code, sea state and grid point");
  }
  if (series.size() != sea_states.size()) {
    throw Error(ErrorKind::Shape, "one gauge series per sea state required");
  }
  config.validate();

  struct Task {
    RunKey key;
    std::size_t series_index;
  };
  std::vector<Task> tasks;
  tasks.reserve(codes.size() * sea_states.size() * grid.size());
  for (const auto& code : codes) {
    for (std::size_t s = 0; s < sea_states.size(); ++s) {
      for (double a : grid.alpha) {
        for (double r : grid.rho) {
          for (double b : grid.beta) tasks.push_back({{code, sea_states[s], {a, r, b}}, s});
        }
      }
    }
  }
  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const Task& x, const Task& y) { return x.key < y.key; });

  std::vector<PredictionReport> reports(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      PredictionReport r;
      try {
        r = evaluate(series[task.series_index], task.key.code, task.key.params,
                     run_seed(master_seed, task.key), config);
      } catch (const std::exception& e) {
        r.error = e.what();
        r.rms = std::numeric_limits<double>::infinity();
      }
      r.code = task.key.code;
      r.params = task.key.params;
      r.sea_state = task.key.sea_state;
      // Keep sweeps light; traces are available per run through evaluate().
      r.truth = {};
      r.prediction = {};
      r.training_fit = {};
      reports[i] = std::move(r);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return reports;
}

// --- statistics ----------------------------------------------------------------

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= values.size() || values[lo] == values[lo + 1]) return values[lo];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values, std::uint64_t seed,
                                              int resamples, double level) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "bootstrap of an empty set");
  Rng rng(seed);
  const std::size_t n = values.size();
  std::vector<double> draw(n);
  std::vector<double> medians;
  medians.reserve(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(
          (static_cast<unsigned __int128>(rng()) * n) >> 64);
      draw[i] = values[idx];
    }
    medians.push_back(median(draw));
  }
  const double tail = 0.5 * (1.0 - level);
  return {quantile(medians, tail), quantile(medians, 1.0 - tail)};
}

std::vector<SummaryRow> summarize(const std::vector<PredictionReport>& reports,
                                  std::uint64_t master_seed) {
  std::vector<std::pair<std::string, std::vector<const PredictionReport*>>> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : reports) {
    const std::string key = r.code.str() + "/Hs=" + csv::format_number(r.sea_state.hs) +
                            "/Tp=" + csv::format_number(r.sea_state.tp);
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) groups.push_back({key, {}});
    groups[it->second].second.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    row.code = members.front()->code;
    row.sea_state = members.front()->sea_state;
    row.runs = members.size();
    std::vector<double> rms;
    for (const auto* m : members) {
      rms.push_back(m->rms);
      if (m->diverged || !m->error.empty()) ++row.diverged;
    }
    row.median = median(rms);
    row.q1 = quantile(rms, 0.25);
    row.q3 = quantile(rms, 0.75);
    std::tie(row.ci_low, row.ci_high) =
        bootstrap_median_ci(rms, derive_seed(master_seed, stable_hash(key) ^ kStreamBootstrap));
    rows.push_back(row);
  }
  return rows;
}

// --- CSV ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> read_table(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || csv::trim(line) != header) {
    throw Error(ErrorKind::Io, "expected header '" + header + "'");
  }
  const std::size_t columns = csv::split(header, ',').size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line, ',');
    if (fields.size() != columns) throw Error(ErrorKind::Io, "malformed row: " + line);
    std::vector<std::string> row;
    for (auto f : fields) row.emplace_back(csv::trim(f));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool parse_flag(const std::string& text) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw Error(ErrorKind::Io, "expected 0 or 1, got '" + text + "'");
}

const char* kReportHeader = "code,alpha,rho,beta,Hs,Tp,rms,n_segments,diverged";
const char* kSummaryHeader = "code,Hs,Tp,runs,diverged,median,ci_low,ci_high,q1,q3";
const char* kTraceHeader = "t,truth,prediction,phase";

}  // namespace

void write_report_csv(std::ostream& out, const std::vector<PredictionReport>& reports) {
  using csv::format_number;
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << r.code.str() << ',' << format_number(r.params.alpha) << ','
        << format_number(r.params.rho) << ',' << format_number(r.params.beta) << ','
        << format_number(r.sea_state.hs) << ',' << format_number(r.sea_state.tp) << ','
        << format_number(r.rms) << ',' << r.n_segments() << ','
        << ((r.diverged || !r.error.empty()) ? 1 : 0) << '\n';
  }
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
  std::vector<ReportRow> out;
  for (const auto& f : read_table(in, kReportHeader)) {
    ReportRow r;
    r.code = parse_code(f[0]);
    r.params = {csv::parse_number(f[1]), csv::parse_number(f[2]), csv::parse_number(f[3])};
    r.sea_state = {csv::parse_number(f[4]), csv::parse_number(f[5])};
    r.rms = csv::parse_number(f[6]);
    r.n_segments = static_cast<std::size_t>(csv::parse_integer(f[7]));
    r.diverged = parse_flag(f[8]);
    out.push_back(r);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  using csv::format_number;
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.code.str() << ',' << format_number(r.sea_state.hs) << ','
        << format_number(r.sea_state.tp) << ',' << r.runs << ',' << r.diverged << ','
        << format_number(r.median) << ',' << format_number(r.ci_low) << ','
        << format_number(r.ci_high) << ',' << format_number(r.q1) << ','
        << format_number(r.q3) << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::vector<SummaryRow> out;
  for (const auto& f : read_table(in, kSummaryHeader)) {
    SummaryRow r;
    r.code = parse_code(f[0]);
    r.sea_state = {csv::parse_number(f[1]), csv::parse_number(f[2])};
    r.runs = static_cast<std::size_t>(csv::parse_integer(f[3]));
    r.diverged = static_cast<std::size_t>(csv::parse_integer(f[4]));
    r.median = csv::parse_number(f[5]);
    r.ci_low = csv::parse_number(f[6]);
    r.ci_high = csv::parse_number(f[7]);
    r.q1 = csv::parse_number(f[8]);
    r.q3 = csv::parse_number(f[9]);
    out.push_back(r);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const GaugeSeries& series, const PredictionReport& report) {
  using csv::format_number;
  out << kTraceHeader << '\n';
  for (std::size_t t = 0; t < report.training_fit.size(); ++t) {
    out << format_number(series.time_of(t)) << ',' << format_number(series.eta[t]) << ','
        << format_number(report.training_fit[t]) << ",train\n";
  }
  const std::size_t offset = report.training_fit.size();
  for (std::size_t k = 0; k < report.truth.size(); ++k) {
    out << format_number(series.time_of(offset + k)) << ',' << format_number(report.truth[k])
        << ',' << format_number(report.prediction[k]) << ",predict\n";
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::vector<TraceRow> out;
  for (const auto& f : read_table(in, kTraceHeader)) {
    if (f[3] != "train" && f[3] != "predict") throw Error(ErrorKind::Io, "unknown phase " + f[3]);
    out.push_back({csv::parse_number(f[0]), csv::parse_number(f[1]), csv::parse_number(f[2]), f[3]});
  }
  return out;
}

}  // namespace wavecho
