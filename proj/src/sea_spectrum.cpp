#include "wavecho/sea_spectrum.hpp"

#include "wavecho/error.hpp"
#include "wavecho/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wavecho {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMinimumBins = 50;
constexpr double kEnvelopeReach = 3.5;  // envelope truncated at this many widths

void check_sea_state(double hs, double tp) {
  if (!(hs > 0.0) || !(tp > 0.0)) {
    throw Error(ErrorKind::InvalidSeaState, "Hs and Tp must be positive");
  }
}

}  // namespace

double SpectrumSpec::m0() const {
  double sum = 0.0;
  for (const auto& c : components) sum += 0.5 * c.amplitude * c.amplitude;
  return sum;
}

double pm_spectrum(double hs, double tp, double f) {
  check_sea_state(hs, tp);
  if (!(f > 0.0)) throw Error(ErrorKind::InvalidSeaState, "frequency must be positive");
  const double fp = 1.0 / tp;
  // m0 of A f^-5 exp(-B f^-4) is A / (4B) with B = 1.25 fp^4.
  const double a = 5.0 * std::pow(fp, 4) * hs * hs / 16.0;
  const double ratio = fp / f;
  return a * std::pow(f, -5.0) * std::exp(-1.25 * std::pow(ratio, 4));
}

double airy_wavenumber(double omega, double depth) {
  if (!(omega > 0.0) || !(depth > 0.0)) {
    throw Error(ErrorKind::Configuration, "dispersion relation needs positive omega and depth");
  }
  const double w2 = omega * omega;
  double k = w2 / (kGravity * std::sqrt(std::tanh(w2 * depth / kGravity)));
  for (int it = 0; it < 100; ++it) {
    const double th = std::tanh(k * depth);
    const double f = kGravity * k * th - w2;
    const double df = kGravity * (th + k * depth * (1.0 - th * th));
    const double step = f / df;
    k -= step;
    if (std::abs(step) <= 1e-12 * k) break;
  }
  return k;
}

double frequency_for_kh(double kh, double depth) {
  const double k = kh / depth;
  return std::sqrt(kGravity * k * std::tanh(kh)) / kTwoPi;
}

int spectrum_bin_count(double f_min, double f_max, double df) {
  if (!(df > 0.0) || !(f_max > f_min)) throw Error(ErrorKind::Resolution, "empty frequency range");
  return static_cast<int>(std::ceil((f_max - f_min) / df - 1e-9)) + 1;
}

SpectrumSpec discretize_spectrum(double hs, double tp, double duration, double depth,
                                 std::uint64_t seed) {
  if (hs < 0.0 || !(tp > 0.0)) throw Error(ErrorKind::InvalidSeaState, "Hs >= 0 and Tp > 0 required");
  if (!(duration > 0.0)) throw Error(ErrorKind::Resolution, "duration must be positive");

  SpectrumSpec spec;
  spec.hs = hs;
  spec.tp = tp;
  spec.depth = depth;
  spec.f_min = kSpectrumLowFrequency;
  spec.f_max = frequency_for_kh(std::numbers::pi, depth);
  spec.df = 1.0 / duration;

  const int bins = spectrum_bin_count(spec.f_min, spec.f_max, spec.df);
  if (bins < kMinimumBins) {
    throw Error(ErrorKind::Resolution, "duration " + std::to_string(duration) + " s gives only " +
                                           std::to_string(bins) + " frequency bins");
  }

  Rng rng(derive_seed(seed, 0x5EA));
  spec.components.resize(bins);
  for (int i = 0; i < bins; ++i) {
    auto& c = spec.components[i];
    c.frequency = spec.f_min + i * spec.df;
    c.omega = kTwoPi * c.frequency;
    c.wavenumber = airy_wavenumber(c.omega, depth);
    c.phase = uniform_open(rng, 0.0, kTwoPi);
    c.amplitude = hs > 0.0 ? std::sqrt(2.0 * pm_spectrum(hs, tp, c.frequency) * spec.df) : 0.0;
  }

  if (hs > 0.0) {
    const double scale = hs / (4.0 * std::sqrt(spec.m0()));
    for (auto& c : spec.components) c.amplitude *= scale;
  }
  return spec;
}

double nwogu_omega(double k, double depth, double z_alpha_coeff) {
  const double alpha = 0.5 * z_alpha_coeff * z_alpha_coeff + z_alpha_coeff;
  const double kh2 = (k * depth) * (k * depth);
  const double w2 =
      kGravity * depth * k * k * (1.0 - (alpha + 1.0 / 3.0) * kh2) / (1.0 - alpha * kh2);
  return std::sqrt(w2);
}

double nwogu_group_velocity(double k, double depth, double z_alpha_coeff) {
  const double dk = 1e-6 * k;
  return (nwogu_omega(k + dk, depth, z_alpha_coeff) - nwogu_omega(k - dk, depth, z_alpha_coeff)) /
         (2.0 * dk);
}

Wavemaker::Wavemaker(SpectrumSpec spectrum, double center, double width, double z_alpha_coeff)
    : spectrum_(std::move(spectrum)), center_(center), width_(width) {
  if (!(width_ > 0.0)) throw Error(ErrorKind::Configuration, "wavemaker width must be positive");
  const double envelope_integral = width_ * std::sqrt(std::numbers::pi);
  gains_.reserve(spectrum_.components.size());
  for (const auto& c : spectrum_.components) {
    const double cg = nwogu_group_velocity(c.wavenumber, spectrum_.depth, z_alpha_coeff);
    gains_.push_back(2.0 * c.amplitude * cg / envelope_integral);
  }
}

double Wavemaker::source(double x, double t) const {
  const double r = (x - center_) / width_;
  if (std::abs(r) > kEnvelopeReach) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    const auto& c = spectrum_.components[i];
    sum += gains_[i] * std::cos(c.wavenumber * x - c.omega * t + c.phase);
  }
  return std::exp(-r * r) * sum;
}

void Wavemaker::bind_grid(double dx, int cells) {
  total_cells_ = cells;
  const double lo = center_ - kEnvelopeReach * width_;
  const double hi = center_ + kEnvelopeReach * width_;
  first_cell_ = std::clamp(static_cast<int>(std::floor(lo / dx)), 0, cells);
  const int last = std::clamp(static_cast<int>(std::ceil(hi / dx)), 0, cells);
  cell_count_ = std::max(0, last - first_cell_);

  const std::size_t n = gains_.size();
  weight_re_.assign(n * cell_count_, 0.0);
  weight_im_.assign(n * cell_count_, 0.0);
  for (int j = 0; j < cell_count_; ++j) {
    const double x = (first_cell_ + j + 0.5) * dx;
    const double r = (x - center_) / width_;
    const double envelope = std::abs(r) > kEnvelopeReach ? 0.0 : std::exp(-r * r);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = spectrum_.components[i];
      const double arg = c.wavenumber * x + c.phase;
      weight_re_[i * cell_count_ + j] = gains_[i] * envelope * std::cos(arg);
      weight_im_[i * cell_count_ + j] = gains_[i] * envelope * std::sin(arg);
    }
  }
}

void Wavemaker::fill(std::vector<double>& out, double t) const {
  out.assign(total_cells_, 0.0);
  if (cell_count_ == 0) return;
  // cos(kx + phi - wt) = Re[(cos(kx+phi) + i sin(kx+phi)) (cos wt - i sin wt)]
  double* dst = out.data() + first_cell_;
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    const double wt = spectrum_.components[i].omega * t;
    const double cw = std::cos(wt);
    const double sw = std::sin(wt);
    const double* re = weight_re_.data() + i * cell_count_;
    const double* im = weight_im_.data() + i * cell_count_;
    for (int j = 0; j < cell_count_; ++j) dst[j] += re[j] * cw + im[j] * sw;
  }
}

}  // namespace wavecho
