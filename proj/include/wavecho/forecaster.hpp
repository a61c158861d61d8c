#pragma once

#include "wavecho/gauge_series.hpp"
#include "wavecho/readout.hpp"
#include "wavecho/reservoir.hpp"
#include "wavecho/spectral.hpp"
#include "wavecho/topology.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace wavecho {

struct ForecastConfig {
  double training_duration = 900.0;    // s
  double evaluation_duration = 600.0;  // s
  int trough_stride = 2;               // refresh weights at every stride-th trough
  std::optional<double> horizon;       // s per free-run segment; 2 Tp when unset
  double sample_rate = 1.0;            // Hz
  int washout = 100;                   // teacher-forced steps excluded from regression
  double ridge = kDefaultRidge;
  double divergence_factor = 50.0;     // |prediction| limit in units of Hs
  int window = 16;                     // spectral frontend length
  bool online_updates = true;

  void validate() const;

  /// 900 s training + 5400 s (1.5 h) evaluation.
  static ForecastConfig full_scale();
};

struct NetworkParams {
  double alpha = 0.5;
  double rho = 0.5;
  double beta = 0.5;
};

struct SeaState {
  double hs = 0.0;
  double tp = 0.0;
  bool operator==(const SeaState&) const = default;
};

/// The sea states of the headline comparison.
std::vector<SeaState> paper_sea_states();

/// {0.1, 0.3, 0.5, 0.7, 0.9}
std::vector<double> paper_parameter_values();

/// Indices i with eta[i] < eta[i-1], eta[i] <= eta[i+1] and eta[i] < 0.
std::vector<std::size_t> detect_troughs(const std::vector<double>& eta);

/// Optional sliding-DFT stage between the scalar signal and the reservoir.
class Frontend {
 public:
  Frontend(bool spectral, int window);

  bool spectral() const { return spectral_; }
  int input_dim() const { return spectral_ ? 2 * frame_.window() : 1; }

  /// Consumes one sample and returns the reservoir input for it.
  Eigen::VectorXd push(double sample);

  /// Scalar value of a readout output (the newest window sample for
  /// spectral outputs).
  double decode(const Eigen::Ref<const Eigen::VectorXd>& output) const;

 private:
  bool spectral_;
  SpectralFrame frame_;
};

/// Everything needed to continue a run: the reservoir driven by the observed
/// signal, the readout statistics, and the weights currently used for
/// prediction.
struct TrainedModel {
  Connectivity conn;
  ReservoirParams params;
  ReservoirState state;
  Frontend frontend;
  ReadoutState readout;
  Eigen::MatrixXd active_weights;
  std::size_t consumed = 0;  // samples fed so far
  std::size_t washout = 0;   // samples fed before regression starts
};

/// Fresh, untrained model for a code; connectivity and biases derive from `seed`.
TrainedModel make_model(const NetworkCode& code, const NetworkParams& params, std::uint64_t seed,
                        const ForecastConfig& config);

/// Teacher-forced run over the training span; each step regresses the
/// reservoir state onto the next input vector, after the washout.
TrainedModel train(const GaugeSeries& series, const NetworkCode& code, const NetworkParams& params,
                   std::uint64_t seed, const ForecastConfig& config);

/// Feeds one observed sample. When `learn` is set and the washout has
/// passed, the readout statistics absorb (previous state, new input); the
/// active weights are left alone.
void observe(TrainedModel& model, double sample, bool learn = true);

/// Scalar prediction of the next sample from the current state.
double predict_next(const TrainedModel& model);

/// Closed-loop prediction of `steps` samples from the model's current state;
/// the model itself is not modified. Stops early when a sample is non-finite
/// or exceeds `limit` in magnitude.
std::vector<double> free_run(const TrainedModel& model, std::size_t steps,
                             double limit = std::numeric_limits<double>::infinity());

struct Segment {
  std::size_t start = 0;   // index into the evaluation span
  std::size_t length = 0;
  bool refreshed = false;  // weights refreshed at this anchor
  double rms = 0.0;
};

struct PredictionReport {
  NetworkCode code;
  NetworkParams params;
  SeaState sea_state;
  double rms = 0.0;
  std::vector<Segment> segments;
  bool diverged = false;
  std::string error;  // non-empty when the run failed

  double start_time = 0.0;  // time of truth[0], s
  double sample_rate = 1.0;
  std::vector<double> truth;       // evaluation span
  std::vector<double> prediction;  // aligned with truth
  std::vector<double> training_fit;  // one-step teacher-forced output over training

  std::size_t n_segments() const { return segments.size(); }
};

double rms_error(const std::vector<double>& prediction, const std::vector<double>& truth);

PredictionReport evaluate(const GaugeSeries& series, const NetworkCode& code,
                          const NetworkParams& params, std::uint64_t seed,
                          const ForecastConfig& config);

// --- sweeps ------------------------------------------------------------------

struct RunKey {
  NetworkCode code;
  SeaState sea_state;
  NetworkParams params;

  std::string str() const;
  bool operator<(const RunKey& other) const;
};

/// Per-run seed from the master seed and the run key.
std::uint64_t run_seed(std::uint64_t master_seed, const RunKey& key);

struct ParameterGrid {
  std::vector<double> alpha = paper_parameter_values();
  std::vector<double> rho = paper_parameter_values();
  std::vector<double> beta = paper_parameter_values();
  std::size_t size() const { return alpha.size() * rho.size() * beta.size(); }
};

/// Cartesian product of codes, sea states and the grid; `series` is indexed
/// like `sea_states`. Runs execute on `jobs` threads; the result is sorted by
/// run key. Failed runs carry their error and rms = inf.
std::vector<PredictionReport> sweep(const std::vector<NetworkCode>& codes,
                                    const std::vector<SeaState>& sea_states,
                                    const std::vector<GaugeSeries>& series,
                                    const ParameterGrid& grid, std::uint64_t master_seed,
                                    const ForecastConfig& config, int jobs = 1);

struct SummaryRow {
  NetworkCode code;
  SeaState sea_state;
  std::size_t runs = 0;
  std::size_t diverged = 0;
  double median = 0.0;
  double ci_low = 0.0;   // 95% bootstrap interval of the median
  double ci_high = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

/// Type-7 quantile of unsorted values.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

/// Percentile bootstrap of the median.
std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values,
                                              std::uint64_t seed, int resamples = 10000,
                                              double level = 0.95);

/// One row per (code, sea state), in the order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<PredictionReport>& reports,
                                  std::uint64_t master_seed);

// --- CSV ---------------------------------------------------------------------

// code,alpha,rho,beta,Hs,Tp,rms,n_segments,diverged
void write_report_csv(std::ostream& out, const std::vector<PredictionReport>& reports);

struct ReportRow {
  NetworkCode code;
  NetworkParams params;
  SeaState sea_state;
  double rms = 0.0;
  std::size_t n_segments = 0;
  bool diverged = false;
};
std::vector<ReportRow> read_report_csv(std::istream& in);

// code,Hs,Tp,runs,diverged,median,ci_low,ci_high,q1,q3
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

// t,truth,prediction,phase with phase in {train, predict}
void write_trace_csv(std::ostream& out, const GaugeSeries& series, const PredictionReport& report);

struct TraceRow {
  double t = 0.0;
  double truth = 0.0;
  double prediction = 0.0;
  std::string phase;
};
std::vector<TraceRow> read_trace_csv(std::istream& in);

}  // namespace wavecho
