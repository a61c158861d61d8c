#include "wavecho/reservoir.hpp"

#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"
#include "wavecho/random.hpp"

#include <ostream>
#include <string>

namespace wavecho {

namespace {

constexpr std::uint64_t kStreamBias = 10;

void check_step_inputs(const ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
                       const Connectivity& conn) {
  if (state.x.size() != conn.units() || state.biases.size() != conn.units()) {
    throw Error(ErrorKind::Shape, "state size does not match the reservoir");
  }
  if (s.size() != conn.inputs()) {
    throw Error(ErrorKind::Shape, "input has " + std::to_string(s.size()) + " entries, expected " +
                                      std::to_string(conn.inputs()));
  }
  if (!s.allFinite()) throw Error(ErrorKind::NumericInput, "non-finite reservoir input");
}

}  // namespace

void ReservoirParams::validate() const {
  if (!(alpha > 0.0)) throw Error(ErrorKind::Configuration, "alpha must be positive");
  if (!(dt > 0.0)) throw Error(ErrorKind::Configuration, "dt must be positive");
  if (!(rho >= 0.0)) throw Error(ErrorKind::Configuration, "rho must be non-negative");
  if (!(beta_max >= 0.0)) throw Error(ErrorKind::Configuration, "beta_max must be non-negative");
}

ReservoirState initial_state(const Connectivity& conn, const ReservoirParams& p) {
  p.validate();
  const int n = conn.units();
  ReservoirState state;
  state.x = Eigen::VectorXd::Zero(n);
  state.biases.resize(n);
  Rng rng(derive_seed(p.seed, kStreamBias));
  if (conn.code.structured()) {
    const double tau = p.tau_m();
    for (int j = 0; j < n; ++j) {
      state.biases(j) = p.beta_max > 0.0
                            ? uniform_open(rng, -tau * p.beta_max, tau * p.beta_max) / tau
                            : 0.0;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      state.biases(j) = p.beta_max > 0.0 ? uniform_open(rng, -p.beta_max, p.beta_max) : 0.0;
    }
  }
  return state;
}

void step_presynaptic(ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Connectivity& conn, const ReservoirParams& p) {
  check_step_inputs(state, s, conn);
  Eigen::VectorXd drive = p.rho * (conn.W * state.x);
  drive += state.biases;
  drive.noalias() += conn.D * s;
  state.x += p.dt * (drive.array().tanh() - p.alpha * state.x.array()).matrix();
}

void step_postsynaptic(ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
                       const Connectivity& conn, const ReservoirParams& p) {
  check_step_inputs(state, s, conn);
  const Eigen::VectorXd rate = state.x.array().tanh().matrix();
  Eigen::VectorXd drive = p.rho * (conn.W * rate);
  drive += state.biases;
  drive.noalias() += conn.D * s;
  state.x += p.dt * (drive - p.alpha * state.x);
}

void step(ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
          const Connectivity& conn, const ReservoirParams& p) {
  if (conn.code.neuron_model == NeuronModel::Presynaptic) {
    step_presynaptic(state, s, conn, p);
  } else {
    step_postsynaptic(state, s, conn, p);
  }
}

Eigen::MatrixXd run_sequence(ReservoirState state, const std::vector<Eigen::VectorXd>& inputs,
                             const Connectivity& conn, const ReservoirParams& p) {
  Eigen::MatrixXd history(conn.units(), static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    step(state, inputs[t], conn, p);
    history.col(static_cast<Eigen::Index>(t)) = state.x;
  }
  return history;
}

void write_state_history_csv(std::ostream& out, const Eigen::MatrixXd& history) {
  out << "step";
  for (Eigen::Index j = 0; j < history.rows(); ++j) out << ",x" << j;
  out << '\n';
  for (Eigen::Index t = 0; t < history.cols(); ++t) {
    out << t;
    for (Eigen::Index j = 0; j < history.rows(); ++j) {
      out << ',' << csv::format_number(history(j, t));
    }
    out << '\n';
  }
}

}  // namespace wavecho
