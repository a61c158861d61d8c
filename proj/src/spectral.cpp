#include "wavecho/spectral.hpp"

#include "wavecho/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wavecho {

namespace {

Complex unit_root(long long numerator, int f, double sign) {
  const long long r = ((numerator % f) + f) % f;
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(r) / f;
  return {std::cos(angle), std::sin(angle)};
}

void check_symmetry(std::span<const Complex> coeffs) {
  const int f = static_cast<int>(coeffs.size());
  double scale = 1.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  for (int k = 0; k < f; ++k) {
    const Complex mirror = std::conj(coeffs[(f - k) % f]);
    if (std::abs(coeffs[k] - mirror) > 1e-6 * scale) {
      throw Error(ErrorKind::InconsistentSpectrum,
                  "coefficients are not conjugate-symmetric at bin " + std::to_string(k));
    }
  }
}

}  // namespace

std::vector<Complex> dft(std::span<const double> samples) {
  const int f = static_cast<int>(samples.size());
  std::vector<Complex> out(f);
  for (int k = 0; k < f; ++k) {
    Complex acc{0.0, 0.0};
    for (int n = 0; n < f; ++n) acc += samples[n] * unit_root(static_cast<long long>(k) * n, f, -1.0);
    out[k] = acc;
  }
  return out;
}

SpectralFrame::SpectralFrame(int window)
    : ring_(window > 0 ? window : 0, 0.0), coeffs_(ring_.size()), rotation_(ring_.size()) {
  if (window <= 0) throw Error(ErrorKind::Shape, "spectral window must be positive");
  for (int k = 0; k < window; ++k) rotation_[k] = unit_root(k, window, +1.0);
}

std::vector<double> SpectralFrame::samples() const {
  std::vector<double> out;
  out.reserve(ring_.size());
  for (std::size_t i = 0; i < ring_.size(); ++i) out.push_back(ring_[(head_ + i) % ring_.size()]);
  return out;
}

void SpectralFrame::push(double sample) {
  if (!std::isfinite(sample)) throw Error(ErrorKind::NumericInput, "non-finite sample");
  const double delta = sample - ring_[head_];
  ring_[head_] = sample;
  head_ = (head_ + 1) % ring_.size();
  if (++since_resync_ >= kResyncInterval) {
    resync();
    return;
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] = (coeffs_[k] + delta) * rotation_[k];
}

void SpectralFrame::resync() {
  const auto ordered = samples();
  coeffs_ = dft(ordered);
  since_resync_ = 0;
}

SpectralFrame window_transform(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorKind::Shape, "empty spectral window");
  SpectralFrame frame(static_cast<int>(samples.size()));
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error(ErrorKind::NumericInput, "non-finite sample");
  }
  // Filling by pushes then resyncing gives the exact direct transform.
  for (double s : samples) frame.push(s);
  frame.resync();
  return frame;
}

SpectralFrame incremental_update(SpectralFrame frame, double new_sample) {
  frame.push(new_sample);
  return frame;
}

Eigen::VectorXd split_to_input(const SpectralFrame& frame) {
  const int f = frame.window();
  Eigen::VectorXd s(2 * f);
  const auto& c = frame.coeffs();
  for (int k = 0; k < f; ++k) {
    s(k) = c[k].real();
    s(f + k) = c[k].imag();
  }
  return s;
}

std::vector<Complex> merge_split(const Eigen::Ref<const Eigen::VectorXd>& split) {
  if (split.size() % 2 != 0) throw Error(ErrorKind::Shape, "split spectrum must have even length");
  const auto f = split.size() / 2;
  std::vector<Complex> out(f);
  for (Eigen::Index k = 0; k < f; ++k) out[k] = {split(k), split(f + k)};
  return out;
}

std::vector<double> inverse_transform(std::span<const Complex> coeffs) {
  const int f = static_cast<int>(coeffs.size());
  if (f == 0) throw Error(ErrorKind::Shape, "empty spectrum");
  check_symmetry(coeffs);
  std::vector<double> out(f);
  for (int n = 0; n < f; ++n) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < f; ++k) acc += coeffs[k] * unit_root(static_cast<long long>(k) * n, f, +1.0);
    out[n] = acc.real() / f;  // imaginary residue is rounding noise
  }
  return out;
}

double newest_sample(std::span<const Complex> coeffs) {
  const int f = static_cast<int>(coeffs.size());
  if (f == 0) throw Error(ErrorKind::Shape, "empty spectrum");
  check_symmetry(coeffs);
  Complex acc{0.0, 0.0};
  for (int k = 0; k < f; ++k) acc += coeffs[k] * unit_root(static_cast<long long>(k) * (f - 1), f, +1.0);
  return acc.real() / f;
}

}  // namespace wavecho
