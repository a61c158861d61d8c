#include "wavecho/readout.hpp"

#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace wavecho {

namespace {

void check_pair(const ReadoutState& st, const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& s) {
  if (x.size() != st.units() || s.size() != st.output_dim()) {
    throw Error(ErrorKind::Shape, "readout sample has the wrong dimension");
  }
  if (!x.allFinite() || !s.allFinite()) {
    throw Error(ErrorKind::NumericInput, "non-finite readout sample");
  }
}

void symmetrize(Eigen::MatrixXd& p) {
  const Eigen::MatrixXd t = p.transpose();
  p = 0.5 * (p + t);
}

}  // namespace

ReadoutState ReadoutState::make(int units, int output_dim, double ridge) {
  if (!(ridge > 0.0)) throw Error(ErrorKind::InvalidRegularizer, "ridge must be positive");
  if (units <= 0 || output_dim <= 0) throw Error(ErrorKind::Shape, "empty readout");
  ReadoutState st;
  st.ridge = ridge;
  st.P = Eigen::MatrixXd::Identity(units, units) / ridge;
  st.G = Eigen::MatrixXd::Zero(units, output_dim);
  st.R = Eigen::MatrixXd::Zero(output_dim, units);
  return st;
}

Eigen::MatrixXd batch_ridge(const Eigen::Ref<const Eigen::MatrixXd>& states,
                            const Eigen::Ref<const Eigen::MatrixXd>& targets, double ridge) {
  if (!(ridge > 0.0)) throw Error(ErrorKind::InvalidRegularizer, "ridge must be positive");
  if (states.cols() < 1 || states.cols() != targets.cols()) {
    throw Error(ErrorKind::Shape, "batch ridge needs matching, non-empty state/target columns");
  }
  Eigen::MatrixXd gram = states * states.transpose();
  gram.diagonal().array() += ridge;
  const Eigen::MatrixXd rhs = states * targets.transpose();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NumericInput, "ridge solve failed");
  Eigen::MatrixXd sol = ldlt.solve(rhs);
  return sol.transpose();
}

void rls_update(ReadoutState& st, const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& s) {
  check_pair(st, x, s);
  const Eigen::VectorXd px = st.P * x;
  const double denom = 1.0 + x.dot(px);
  const Eigen::VectorXd gain = px / denom;
  const Eigen::VectorXd err = s - st.R * x;
  st.R.noalias() += err * gain.transpose();
  st.P.noalias() -= gain * px.transpose();
  symmetrize(st.P);
  st.G.noalias() += x * s.transpose();
}

void rls_downdate(ReadoutState& st, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& s) {
  check_pair(st, x, s);
  const Eigen::VectorXd px = st.P * x;
  const double denom = 1.0 - x.dot(px);
  if (!(denom > kRemovabilityEpsilon)) {
    throw Error(ErrorKind::DowndateSingularity,
                "sample cannot be removed (1 - x'Px = " + csv::format_number(denom) + ")");
  }
  const Eigen::VectorXd gain = px / denom;
  const Eigen::VectorXd err = st.R * x - s;
  st.R.noalias() += err * gain.transpose();
  st.P.noalias() += gain * px.transpose();
  symmetrize(st.P);
  st.G.noalias() -= x * s.transpose();
}

Eigen::VectorXd predict_output(const Eigen::Ref<const Eigen::MatrixXd>& weights,
                               const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (weights.cols() != x.size()) throw Error(ErrorKind::Shape, "readout/state size mismatch");
  return weights * x;
}

void refresh_weights(ReadoutState& st) { st.R = (st.P * st.G).transpose(); }

OnlineReadout::OnlineReadout(int units, int output_dim, double ridge, std::optional<int> window)
    : state_(ReadoutState::make(units, output_dim, ridge)), window_(window) {
  if (window_ && *window_ < 1) throw Error(ErrorKind::Configuration, "window must be positive");
}

void OnlineReadout::absorb(const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
  rls_update(state_, x, s);
  ++count_;
  if (!window_) return;
  history_.emplace_back(x, s);
  if (static_cast<int>(history_.size()) > *window_) {
    const auto& [old_x, old_s] = history_.front();
    rls_downdate(state_, old_x, old_s);
    history_.pop_front();
  }
}

void write_weights_csv(std::ostream& out, const Eigen::MatrixXd& weights) {
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      if (j) out << ',';
      out << csv::format_number(weights(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_weights_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    std::vector<double> row;
    for (auto cell : csv::split(line)) row.push_back(csv::parse_number(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Io, "weights file has ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Io, "weights file is empty");
  Eigen::MatrixXd w(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) w(i, j) = rows[i][j];
  }
  return w;
}

}  // namespace wavecho
