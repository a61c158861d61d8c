#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace wavecho {

using Complex = std::complex<double>;

/// Rectangular sliding window of F samples and its unnormalised DFT,
/// X_k = sum_n w_n exp(-i 2 pi k n / F) with n = 0 the oldest sample.
/// Updates cost O(F); the spectrum is recomputed from the buffer every
/// `kResyncInterval` updates to bound accumulated rounding.
class SpectralFrame {
 public:
  static constexpr int kResyncInterval = 4096;

  explicit SpectralFrame(int window = 16);

  int window() const { return static_cast<int>(ring_.size()); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Buffer contents ordered oldest to newest.
  std::vector<double> samples() const;

  /// Evicts the oldest sample and appends `sample`.
  void push(double sample);

  /// Recomputes the spectrum directly from the buffer.
  void resync();

 private:
  std::vector<double> ring_;
  std::size_t head_ = 0;  // index of the oldest sample
  std::vector<Complex> coeffs_;
  std::vector<Complex> rotation_;  // exp(+i 2 pi k / F)
  int since_resync_ = 0;
};

std::vector<Complex> dft(std::span<const double> samples);

SpectralFrame window_transform(std::span<const double> samples);

SpectralFrame incremental_update(SpectralFrame frame, double new_sample);

/// [Re X_0..Re X_{F-1}, Im X_0..Im X_{F-1}]
Eigen::VectorXd split_to_input(const SpectralFrame& frame);

/// Inverse of split_to_input's layout.
std::vector<Complex> merge_split(const Eigen::Ref<const Eigen::VectorXd>& split);

/// 1/F-normalised inverse DFT of a real signal's spectrum. Throws
/// InconsistentSpectrum when conjugate symmetry is violated beyond 1e-6
/// (relative to the largest coefficient).
std::vector<double> inverse_transform(std::span<const Complex> coeffs);

/// Newest-slot value of the inverse transform.
double newest_sample(std::span<const Complex> coeffs);

}  // namespace wavecho
