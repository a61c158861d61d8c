#include "oracles.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace oracle {

double power_iteration_radius(const Eigen::MatrixXd& a, int squarings) {
  const double n0 = a.norm();
  if (n0 == 0.0) return 0.0;
  Eigen::MatrixXd b = a / n0;
  double log_scale = std::log(n0);  // A^(2^m) = exp(log_scale) * b
  double power = 1.0;
  for (int m = 0; m < squarings; ++m) {
    Eigen::MatrixXd sq = b * b;
    const double nrm = sq.norm();
    if (nrm == 0.0) return 0.0;  // nilpotent
    log_scale = 2.0 * log_scale + std::log(nrm);
    power *= 2.0;
    b = sq / nrm;
  }
  return std::exp(log_scale / power);
}

std::vector<std::complex<double>> fftw_dft(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  for (int i = 0; i < n; ++i) {
    in[i][0] = samples[i];
    in[i][1] = 0.0;
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> result(n);
  for (int i = 0; i < n; ++i) result[i] = {out[i][0], out[i][1]};
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return result;
}

Eigen::MatrixXd ridge_qr(const Eigen::MatrixXd& states, const Eigen::MatrixXd& targets, double r) {
  const Eigen::Index n = states.rows();
  const Eigen::Index t = states.cols();
  Eigen::MatrixXd a(t + n, n);
  a.topRows(t) = states.transpose();
  a.bottomRows(n) = std::sqrt(r) * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(t + n, targets.rows());
  b.topRows(t) = targets.transpose();
  return a.householderQr().solve(b).transpose();
}

void rate_pair_step(const RatePair& sys, Eigen::VectorXd& u, Eigen::VectorXd& v,
                    const Eigen::VectorXd& drive_e, const Eigen::VectorXd& drive_i, double dt) {
  const Eigen::VectorXd gu = u.array().tanh().matrix();
  const Eigen::VectorXd gv = v.array().tanh().matrix();
  const Eigen::VectorXd du =
      (-u + sys.rho * (sys.wee * gu) - sys.rho * (sys.wei * gv) + sys.beta_e + drive_e) / sys.tau;
  const Eigen::VectorXd dv =
      (-v + sys.rho * (sys.wie * gu) - sys.rho * (sys.wii * gv) + sys.beta_i + drive_i) / sys.tau;
  u += dt * du;
  v += dt * dv;
}

namespace {

// Wave curve f_K(h) and its derivative (Toro, exact Riemann solver for SWE).
void wave_curve(double h, double hk, double g, double& f, double& df) {
  const double ck = std::sqrt(g * hk);
  if (h <= hk) {
    const double c = std::sqrt(g * h);
    f = 2.0 * (c - ck);
    df = g / c;
  } else {
    const double gk = std::sqrt(0.5 * g * (h + hk) / (h * hk));
    f = (h - hk) * gk;
    df = gk - g * (h - hk) / (4.0 * h * h * gk);
  }
}

}  // namespace

SwState exact_riemann_at_face(SwState left, SwState right, double g) {
  const double hl = left.depth, hr = right.depth, ul = left.velocity, ur = right.velocity;
  const double cl = std::sqrt(g * hl), cr = std::sqrt(g * hr);
  if (2.0 * (cl + cr) <= ur - ul) throw std::runtime_error("dry middle state");

  double h = std::pow(0.5 * (cl + cr) - 0.25 * (ur - ul), 2) / g;
  for (int it = 0; it < 200; ++it) {
    double fl, dfl, fr, dfr;
    wave_curve(h, hl, g, fl, dfl);
    wave_curve(h, hr, g, fr, dfr);
    const double step = (fl + fr + ur - ul) / (dfl + dfr);
    h = std::max(h - step, 1e-14);
    if (std::abs(step) < 1e-15 * h) break;
  }
  double fl, dfl, fr, dfr;
  wave_curve(h, hl, g, fl, dfl);
  wave_curve(h, hr, g, fr, dfr);
  const double us = 0.5 * (ul + ur) + 0.5 * (fr - fl);
  const double cs = std::sqrt(g * h);

  if (us >= 0.0) {  // face sits left of the contact
    if (h > hl) {   // left shock
      const double s = ul - cl * std::sqrt(0.5 * (h + hl) * h / (hl * hl));
      return s >= 0.0 ? left : SwState{h, us};
    }
    const double head = ul - cl, tail = us - cs;
    if (head >= 0.0) return left;
    if (tail <= 0.0) return {h, us};
    const double c = (ul + 2.0 * cl) / 3.0;  // inside the fan at x/t = 0
    return {c * c / g, c};
  }
  if (h > hr) {  // right shock
    const double s = ur + cr * std::sqrt(0.5 * (h + hr) * h / (hr * hr));
    return s <= 0.0 ? right : SwState{h, us};
  }
  const double head = ur + cr, tail = us + cs;
  if (head <= 0.0) return right;
  if (tail >= 0.0) return {h, us};
  const double c = (-ur + 2.0 * cr) / 3.0;
  return {c * c / g, -c};
}

double airy_wavenumber_bisection(double omega, double depth, double g) {
  double lo = 0.0, hi = 1.0;
  auto f = [&](double k) { return g * k * std::tanh(k * depth) - omega * omega; };
  while (f(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
