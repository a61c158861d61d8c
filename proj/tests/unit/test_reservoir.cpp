#include "helpers.hpp"
#include "wavecho/random.hpp"
#include "wavecho/reservoir.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace wavecho;

namespace {

Connectivity scalar_net(double w, double d, NeuronModel model) {
  Connectivity c;
  c.code.neuron_model = model;
  c.W = Eigen::MatrixXd::Constant(1, 1, w);
  c.D = Eigen::MatrixXd::Constant(1, 1, d);
  return c;
}

ReservoirState scalar_state(double x) {
  return {Eigen::VectorXd::Constant(1, x), Eigen::VectorXd::Zero(1)};
}

std::vector<Eigen::VectorXd> noise_inputs(int steps, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> out;
  for (int t = 0; t < steps; ++t) {
    Eigen::VectorXd s(dim);
    for (int i = 0; i < dim; ++i) s[i] = uniform_open(rng, -1.0, 1.0);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("presynaptic hand values") {
  ReservoirParams p;
  p.alpha = 1.0;
  p.dt = 0.1;
  p.rho = 1.0;
  const Connectivity c = scalar_net(0.0, 1.0, NeuronModel::Presynaptic);
  ReservoirState s = scalar_state(0.0);
  step_presynaptic(s, Eigen::VectorXd::Constant(1, 10.0), c, p);
  CHECK(s.x[0] == doctest::Approx(0.1 * std::tanh(10.0)).epsilon(1e-15));
  CHECK(s.x[0] == doctest::Approx(0.099995).epsilon(1e-5));

  ReservoirState zero = scalar_state(0.0);
  step_presynaptic(zero, Eigen::VectorXd::Zero(1), c, p);
  CHECK(zero.x[0] == 0.0);
}

TEST_CASE("postsynaptic hand values") {
  ReservoirParams p;
  p.alpha = 1.0;
  p.dt = 0.1;
  p.rho = 1.0;
  const Connectivity c = scalar_net(1.0, 1.0, NeuronModel::Postsynaptic);
  ReservoirState s = scalar_state(2.0);
  step_postsynaptic(s, Eigen::VectorXd::Zero(1), c, p);
  CHECK(s.x[0] == doctest::Approx(2.0 + 0.1 * (-2.0 + std::tanh(2.0))).epsilon(1e-15));
  CHECK(s.x[0] == doctest::Approx(1.89640).epsilon(1e-5));

  ReservoirState zero = scalar_state(0.0);
  step_postsynaptic(zero, Eigen::VectorXd::Zero(1), c, p);
  CHECK(zero.x[0] == 0.0);
}

TEST_CASE("step errors") {
  ReservoirParams p;
  const Connectivity c = scalar_net(0.5, 1.0, NeuronModel::Presynaptic);
  ReservoirState s = scalar_state(0.0);
  CHECK(error_kind([&] { step(s, Eigen::VectorXd::Zero(2), c, p); }) == ErrorKind::Shape);
  CHECK(error_kind([&] { step(s, Eigen::VectorXd::Constant(1, NAN), c, p); }) ==
        ErrorKind::NumericInput);
  ReservoirParams bad;
  bad.alpha = 0.0;
  CHECK(error_kind([&] { bad.validate(); }) == ErrorKind::Configuration);
}

TEST_CASE("biases follow the per-variant range") {
  for (const char* text : {"0000", "1111"}) {
    const NetworkCode code = parse_code(text);
    ReservoirParams p;
    p.alpha = 0.3;
    p.beta_max = 0.7;
    p.seed = 5;
    const Connectivity c = build_connectivity(code, 2, p.tau_m());
    const ReservoirState s = initial_state(c, p);
    CHECK(s.x.isZero(0.0));
    CHECK(s.biases.size() == c.units());
    CHECK(s.biases.cwiseAbs().maxCoeff() <= 0.7);
    CHECK(s.biases.cwiseAbs().maxCoeff() > 0.5);
    CHECK(initial_state(c, p).biases == s.biases);
  }
}

TEST_CASE("presynaptic boundedness") {
  ReservoirParams p;
  p.alpha = 0.5;
  p.dt = 0.5;
  p.rho = 0.9;
  p.beta_max = 0.9;
  const Connectivity c = build_connectivity(parse_code("0001"), 8, p.tau_m());
  ReservoirState s = initial_state(c, p);
  for (const auto& in : noise_inputs(1000, 1, 3)) {
    step(s, 50.0 * in, c, p);
    REQUIRE(s.x.cwiseAbs().maxCoeff() <= 2.0);
  }
}

TEST_CASE("run_sequence") {
  ReservoirParams p;
  const Connectivity c = build_connectivity(parse_code("1110"), 8, p.tau_m());
  const ReservoirState s0 = initial_state(c, p);
  CHECK(run_sequence(s0, {}, c, p).cols() == 0);

  ReservoirState quiet{Eigen::VectorXd::Zero(c.units()), Eigen::VectorXd::Zero(c.units())};
  std::vector<Eigen::VectorXd> zeros(20, Eigen::VectorXd::Zero(c.inputs()));
  CHECK(run_sequence(quiet, zeros, c, p).isZero(0.0));

  const auto inputs = noise_inputs(100, c.inputs(), 4);
  const Eigen::MatrixXd a = run_sequence(s0, inputs, c, p);
  CHECK(a == run_sequence(s0, inputs, c, p));
  CHECK(a.cols() == 100);
  CHECK(a.allFinite());

  ReservoirState manual = s0;
  for (int t = 0; t < 10; ++t) step(manual, inputs[t], c, p);
  CHECK(a.col(9) == manual.x);

  std::stringstream ss;
  write_state_history_csv(ss, a.leftCols(2));
  std::string header, first;
  std::getline(ss, header);
  std::getline(ss, first);
  CHECK(header.rfind("step,x0,x1,", 0) == 0);
  CHECK(first.rfind("0,", 0) == 0);
}

TEST_CASE("Euler error is first order in dt") {
  for (const char* text : {"0000", "1100"}) {
    CAPTURE(text);
    ReservoirParams p;
    p.alpha = 0.5;
    p.rho = 0.5;
    p.beta_max = 0.3;
    const Connectivity c = build_connectivity(parse_code(text), 12, p.tau_m());
    const double horizon = 20.0;
    auto run = [&](double dt) {
      ReservoirParams q = p;
      q.dt = dt;
      ReservoirState s = initial_state(c, q);
      const int steps = static_cast<int>(std::lround(horizon / dt));
      for (int n = 0; n < steps; ++n) {
        step(s, Eigen::VectorXd::Constant(1, std::sin(0.3 * n * dt)), c, q);
      }
      return s.x;
    };
    const Eigen::VectorXd a = run(0.2), b = run(0.1), d = run(0.05), e = run(0.025);
    const double r1 = (a - b).norm() / (b - d).norm();
    const double r2 = (b - d).norm() / (d - e).norm();
    CHECK(r1 >= 1.5);
    CHECK(r1 <= 2.5);
    CHECK(r2 >= 1.5);
    CHECK(r2 <= 2.5);
  }
}

TEST_CASE("echo state: runs from different initial states converge") {
  for (const auto& code : NetworkCode::all()) {
    CAPTURE(code.str());
    ReservoirParams p;
    p.alpha = 0.5;
    p.rho = 0.5;
    p.beta_max = 0.5;
    const Connectivity c = build_connectivity(code, 21, p.tau_m());
    ReservoirState a = initial_state(c, p);
    ReservoirState b = a;
    Rng rng(99);
    for (int i = 0; i < b.x.size(); ++i) b.x[i] = uniform_open(rng, -2.0, 2.0);
    for (const auto& in : noise_inputs(2000, c.inputs(), 6)) {
      step(a, in, c, p);
      step(b, in, c, p);
    }
    CHECK((a.x - b.x).norm() < 1e-6);
  }
}
