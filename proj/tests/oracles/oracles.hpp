#pragma once

// Independent reference implementations used only by the test suites.

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace oracle {

/// Spectral radius from the growth of ||A^(2^m)||, by repeated normalised
/// squaring: rho = lim exp(log||A^(2^m)|| / 2^m).
double power_iteration_radius(const Eigen::MatrixXd& a, int squarings = 48);

/// Unnormalised forward DFT computed by FFTW.
std::vector<std::complex<double>> fftw_dft(const std::vector<double>& samples);

/// Ridge solution by Householder QR on the stacked system
/// [X^T; sqrt(r) I] R^T = [S^T; 0].
Eigen::MatrixXd ridge_qr(const Eigen::MatrixXd& states, const Eigen::MatrixXd& targets, double r);

/// Excitatory/inhibitory rate pair integrated with explicit Euler in the
/// field-block form:
///   tau u' = -u + rho Wee g(u) - rho Wei g(v) + beta_e + I_e
///   tau v' = -v + rho Wie g(u) - rho Wii g(v) + beta_i + I_i
struct RatePair {
  Eigen::MatrixXd wee, wei, wie, wii;
  Eigen::VectorXd beta_e, beta_i;
  double tau = 1.0;
  double rho = 1.0;
};
void rate_pair_step(const RatePair& sys, Eigen::VectorXd& u, Eigen::VectorXd& v,
                    const Eigen::VectorXd& drive_e, const Eigen::VectorXd& drive_i, double dt);

/// Exact Riemann solution of the 1D shallow water equations sampled on x/t = 0.
struct SwState {
  double depth;
  double velocity;
};
SwState exact_riemann_at_face(SwState left, SwState right, double g);

/// omega^2 = g k tanh(k h) solved by bisection.
double airy_wavenumber_bisection(double omega, double depth, double g);

}  // namespace oracle
