#pragma once

#include <cstdint>
#include <vector>

namespace wavecho {

inline constexpr double kGravity = 9.81;
inline constexpr double kSpectrumLowFrequency = 1.0 / 30.0;  // Hz
inline constexpr double kDefaultZAlphaCoeff = -0.531;

struct WaveComponent {
  double amplitude = 0.0;   // a_i, m
  double frequency = 0.0;   // Hz
  double omega = 0.0;       // rad/s
  double wavenumber = 0.0;  // rad/m, linear dispersion at the offshore depth
  double phase = 0.0;       // rad
};

struct SpectrumSpec {
  double hs = 0.0;
  double tp = 0.0;
  double f_min = kSpectrumLowFrequency;
  double f_max = 0.0;
  double df = 0.0;
  double depth = 0.0;  // offshore depth the wavenumbers refer to
  std::vector<WaveComponent> components;

  /// Zeroth moment of the discretised spectrum, sum a_i^2 / 2.
  double m0() const;
};

/// Pierson-Moskowitz density A f^-5 exp(-1.25 (f/fp)^-4), fp = 1/Tp, with A
/// chosen so that 4 sqrt(m0) = Hs over (0, inf). m^2/Hz.
double pm_spectrum(double hs, double tp, double f);

/// Solves omega^2 = g k tanh(k h) by Newton iteration to 1e-12.
double airy_wavenumber(double omega, double depth);

/// Frequency (Hz) whose Airy wavenumber gives k h = kh.
double frequency_for_kh(double kh, double depth);

/// Number of bins on [f_min, f_max] at spacing df when both endpoints are
/// included: ceil((f_max - f_min) / df) + 1.
int spectrum_bin_count(double f_min, double f_max, double df);

/// Uniform bins from 1/30 Hz up to the kh = pi cut-off at `depth`, with
/// df = 1/duration. Amplitudes a_i = sqrt(2 S(f_i) df) are rescaled so the
/// discrete m0 gives 4 sqrt(m0) = Hs. Phases are U[0, 2pi) from `seed` and
/// depend only on the bin index, so every sea state sharing a duration uses
/// the same phase set. Hs == 0 yields zero amplitudes.
SpectrumSpec discretize_spectrum(double hs, double tp, double duration, double depth,
                                 std::uint64_t seed);

/// Phase speed omega/k and group speed of the linearised Nwogu equations
/// with reference level z_alpha = coeff * h.
double nwogu_omega(double k, double depth, double z_alpha_coeff = kDefaultZAlphaCoeff);
double nwogu_group_velocity(double k, double depth, double z_alpha_coeff = kDefaultZAlphaCoeff);

/// Mass-source wavemaker: a Gaussian envelope exp(-((x - x0)/w)^2) times
/// sum_i D_i cos(k_i x - omega_i t + phi_i). Gains D_i = 2 a_i c_g / (w sqrt(pi))
/// make each component leave the source region with amplitude a_i.
class Wavemaker {
 public:
  Wavemaker(SpectrumSpec spectrum, double center, double width,
            double z_alpha_coeff = kDefaultZAlphaCoeff);

  double source(double x, double t) const;

  /// Precomputes per-cell phasors for cell centres x_j = (j + 1/2) dx.
  void bind_grid(double dx, int cells);

  /// Source at every bound cell centre; cells outside the envelope get 0.
  void fill(std::vector<double>& out, double t) const;

  const SpectrumSpec& spectrum() const { return spectrum_; }
  const std::vector<double>& gains() const { return gains_; }
  double center() const { return center_; }
  double width() const { return width_; }

 private:
  SpectrumSpec spectrum_;
  double center_;
  double width_;
  std::vector<double> gains_;

  // Grid binding: cells [first_, first_ + count) carry weights laid out
  // component-major, weight = D_i G(x_j) exp(i (k_i x_j + phi_i)).
  int first_cell_ = 0;
  int cell_count_ = 0;
  int total_cells_ = 0;
  std::vector<double> weight_re_;
  std::vector<double> weight_im_;
};

}  // namespace wavecho
