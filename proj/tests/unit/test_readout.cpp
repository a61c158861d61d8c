#include "helpers.hpp"
#include "oracles/oracles.hpp"
#include "wavecho/random.hpp"
#include "wavecho/readout.hpp"

#include <doctest.h>

#include <chrono>
#include <sstream>

using namespace wavecho;

namespace {

Eigen::MatrixXd noise(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = uniform_open(rng, -1.0, 1.0);
  return m;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("batch ridge hand cases") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
  CHECK((batch_ridge(id, id, 1e-12) - id).cwiseAbs().maxCoeff() < 1e-9);

  Eigen::MatrixXd x(1, 2), s(1, 2);
  x << 1, 2;
  s << 2, 4;
  CHECK(batch_ridge(x, s, 0.001)(0, 0) == doctest::Approx(10.0 / 5.001).epsilon(1e-14));
  CHECK(error_kind([&] { batch_ridge(x, s, 0.0); }) == ErrorKind::InvalidRegularizer);

  const Eigen::MatrixXd xs = noise(12, 40, 1), ts = noise(3, 40, 2);
  CHECK(rel(batch_ridge(xs, ts, 0.1), oracle::ridge_qr(xs, ts, 0.1)) < 1e-12);
}

TEST_CASE("rls matches batch ridge") {
  const double r = 1e-3;
  const Eigen::MatrixXd x = noise(16, 500, 3), s = noise(2, 500, 4);
  ReadoutState st = ReadoutState::make(16, 2, r);
  rls_update(st, x.col(0), s.col(0));
  CHECK((st.R - batch_ridge(x.leftCols(1), s.leftCols(1), r)).cwiseAbs().maxCoeff() < 1e-10);
  for (int t = 1; t < 500; ++t) rls_update(st, x.col(t), s.col(t));
  CHECK((st.R - batch_ridge(x, s, r)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((st.R - oracle::ridge_qr(x, s, r)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("zero vectors leave the state unchanged") {
  ReadoutState st = ReadoutState::make(4, 1, 0.5);
  rls_update(st, noise(4, 1, 5).col(0), noise(1, 1, 6).col(0));
  const ReadoutState before = st;
  rls_update(st, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Ones(1));
  CHECK(st.P == before.P);
  CHECK(st.R == before.R);
  rls_downdate(st, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Ones(1));
  CHECK(st.P == before.P);
  CHECK(st.R == before.R);
}

TEST_CASE("update then downdate restores the state") {
  ReadoutState st = ReadoutState::make(8, 2, 0.1);
  const Eigen::MatrixXd x = noise(8, 30, 7), s = noise(2, 30, 8);
  for (int t = 0; t < 29; ++t) rls_update(st, x.col(t), s.col(t));
  const ReadoutState before = st;
  rls_update(st, x.col(29), s.col(29));
  rls_downdate(st, x.col(29), s.col(29));
  CHECK((st.P - before.P).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((st.R - before.R).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("downdate of an unabsorbed dominant sample is rejected") {
  ReadoutState st = ReadoutState::make(2, 1, 1e-6);
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;
  CHECK(error_kind([&] { rls_downdate(st, x, Eigen::VectorXd::Ones(1)); }) ==
        ErrorKind::DowndateSingularity);
}

TEST_CASE("windowed readout equals batch ridge on the window") {
  const int n = 64, window = 200, total = 1000;
  const double r = 1e-6;
  const Eigen::MatrixXd x = noise(n, total, 9), s = noise(1, total, 10);
  OnlineReadout online(n, 1, r, window);
  for (int t = 0; t < total; ++t) online.absorb(x.col(t), s.col(t));
  const Eigen::MatrixXd batch = batch_ridge(x.rightCols(window), s.rightCols(window), r);
  CHECK((online.weights() - batch).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(online.absorbed() == static_cast<std::size_t>(total));
}

TEST_CASE("P stays symmetric over many updates and downdates") {
  const int n = 16;
  OnlineReadout online(n, 1, 1e-2, 50);
  const Eigen::MatrixXd x = noise(n, 10000, 11), s = noise(1, 10000, 12);
  for (int t = 0; t < 10000; ++t) online.absorb(x.col(t), s.col(t));
  const Eigen::MatrixXd& p = online.state().P;
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-8);
  Eigen::LLT<Eigen::MatrixXd> llt(p);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("predict_output") {
  CHECK(predict_output(Eigen::MatrixXd::Zero(2, 3), Eigen::Vector3d(1, 2, 3)).isZero(0.0));
  const Eigen::Vector3d x(1, -2, 3);
  CHECK(predict_output(Eigen::Matrix3d::Identity(), x) == x);
  Eigen::MatrixXd r(1, 2);
  r << 2, -1;
  CHECK(predict_output(r, Eigen::Vector2d(3, 4))[0] == 2.0);
  CHECK(error_kind([&] { predict_output(r, x); }) == ErrorKind::Shape);
}

TEST_CASE("single update at N=128 is fast") {
  ReadoutState st = ReadoutState::make(128, 1);
  const Eigen::MatrixXd x = noise(128, 200, 13), s = noise(1, 200, 14);
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 200; ++t) rls_update(st, x.col(t), s.col(t));
  const double per = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 200;
  CHECK(per < 1e-3);
}

TEST_CASE("weights csv round-trips exactly") {
  const Eigen::MatrixXd w = noise(3, 7, 15);
  std::stringstream ss;
  write_weights_csv(ss, w);
  CHECK(read_weights_csv(ss) == w);
}
