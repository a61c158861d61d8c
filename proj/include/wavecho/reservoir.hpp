#pragma once

#include "wavecho/topology.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace wavecho {

struct ReservoirParams {
  double alpha = 0.5;     // leak rate, 1/s
  double rho = 0.5;       // multiplier on the unit-radius W
  double beta_max = 0.5;  // bias half-range
  double dt = 1.0;        // Euler step, s
  std::uint64_t seed = 0;

  double tau_m() const { return 1.0 / alpha; }
  void validate() const;
};

struct ReservoirState {
  Eigen::VectorXd x;       // [u; v] for structured variants
  Eigen::VectorXd biases;
};

/// Zero state with biases drawn once. Structured variants draw from
/// U(-tau_m*beta, tau_m*beta) and divide by tau_m.
ReservoirState initial_state(const Connectivity& conn, const ReservoirParams& p);

// Explicit Euler, x += dt * (-alpha x + tanh(rho W x + b + D s)).
void step_presynaptic(ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Connectivity& conn, const ReservoirParams& p);

// Explicit Euler, x += dt * (-alpha x + rho W tanh(x) + b + D s).
void step_postsynaptic(ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
                       const Connectivity& conn, const ReservoirParams& p);

/// Dispatches on the code's neuron model.
void step(ReservoirState& state, const Eigen::Ref<const Eigen::VectorXd>& s,
          const Connectivity& conn, const ReservoirParams& p);

/// State history, one column per consumed input.
Eigen::MatrixXd run_sequence(ReservoirState state, const std::vector<Eigen::VectorXd>& inputs,
                             const Connectivity& conn, const ReservoirParams& p);

/// Rows of "step,x0,...,x{N-1}".
void write_state_history_csv(std::ostream& out, const Eigen::MatrixXd& history);

}  // namespace wavecho
