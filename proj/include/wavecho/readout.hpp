#pragma once

#include <Eigen/Dense>

#include <deque>
#include <iosfwd>
#include <optional>
#include <utility>

namespace wavecho {

inline constexpr double kDefaultRidge = 1e-6;
inline constexpr double kRemovabilityEpsilon = 1e-10;

/// Ridge readout maintained by recursive least squares.
///   P = (sum x x^T + r I)^-1,  G = sum x s^T,  R = (P G)^T.
/// P starts at I/r and G at zero, so R equals the batch ridge solution on
/// exactly the data absorbed so far.
struct ReadoutState {
  Eigen::MatrixXd R;  // output_dim x N
  Eigen::MatrixXd P;  // N x N
  Eigen::MatrixXd G;  // N x output_dim
  double ridge = kDefaultRidge;

  static ReadoutState make(int units, int output_dim, double ridge = kDefaultRidge);

  int units() const { return static_cast<int>(P.rows()); }
  int output_dim() const { return static_cast<int>(R.rows()); }
};

/// Direct solve of (X X^T + r I) R^T = X S^T. X holds one state per column.
Eigen::MatrixXd batch_ridge(const Eigen::Ref<const Eigen::MatrixXd>& states,
                            const Eigen::Ref<const Eigen::MatrixXd>& targets, double ridge);

/// Rank-one absorb of (x, s); O(N^2 + N*out), no inversion.
void rls_update(ReadoutState& state, const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& s);

/// Rank-one removal of a previously absorbed (x, s). Throws
/// DowndateSingularity when 1 - x^T P x <= 1e-10.
void rls_downdate(ReadoutState& state, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& s);

Eigen::VectorXd predict_output(const Eigen::Ref<const Eigen::MatrixXd>& weights,
                               const Eigen::Ref<const Eigen::VectorXd>& x);

/// Recomputes R from P and G, discarding drift from the gain-form updates.
void refresh_weights(ReadoutState& state);

/// RLS with an optional trailing window: once more than `window` pairs have
/// been absorbed the oldest is downdated.
class OnlineReadout {
 public:
  OnlineReadout(int units, int output_dim, double ridge = kDefaultRidge,
                std::optional<int> window = std::nullopt);

  void absorb(const Eigen::VectorXd& x, const Eigen::VectorXd& s);

  const ReadoutState& state() const { return state_; }
  const Eigen::MatrixXd& weights() const { return state_.R; }
  std::size_t absorbed() const { return count_; }

 private:
  ReadoutState state_;
  std::optional<int> window_;
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history_;
  std::size_t count_ = 0;
};

// output_dim rows x N columns, plain numbers.
void write_weights_csv(std::ostream& out, const Eigen::MatrixXd& weights);
Eigen::MatrixXd read_weights_csv(std::istream& in);

}  // namespace wavecho
