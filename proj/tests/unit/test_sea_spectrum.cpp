#include "helpers.hpp"
#include "oracles/oracles.hpp"
#include "wavecho/sea_spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wavecho;

TEST_CASE("PM density shape") {
  CHECK(pm_spectrum(1.0, 10.0, 1e-3) < 1e-12);
  CHECK(pm_spectrum(1.0, 10.0, 50.0) < 1e-6);
  CHECK(pm_spectrum(1.0, 10.0, 0.1) > pm_spectrum(1.0, 10.0, 0.2));
  CHECK(error_kind([] { pm_spectrum(0.0, 10.0, 0.1); }) == ErrorKind::InvalidSeaState);
  CHECK(error_kind([] { pm_spectrum(1.0, -1.0, 0.1); }) == ErrorKind::InvalidSeaState);
  CHECK(error_kind([] { pm_spectrum(1.0, 10.0, 0.0); }) == ErrorKind::InvalidSeaState);

  // Continuous zeroth moment by fine trapezoid integration.
  double m0 = 0.0;
  const double df = 1e-5;
  for (double f = df; f < 5.0; f += df) m0 += 0.5 * df * (pm_spectrum(2.0, 12.0, f) + pm_spectrum(2.0, 12.0, f + df));
  CHECK(4.0 * std::sqrt(m0) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("discretised spectrum") {
  for (double tp : {8.0, 10.0, 14.0}) {
    CAPTURE(tp);
    const SpectrumSpec s = discretize_spectrum(1.5, tp, 7200.0, 30.0, 3);
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.components.size(); ++i) {
      if (s.components[i].amplitude > s.components[best].amplitude) best = i;
    }
    CHECK(std::abs(s.components[best].frequency - 1.0 / tp) <= s.df);
    CHECK(std::abs(4.0 * std::sqrt(s.m0()) - 1.5) <= 0.02 * 1.5);
    for (const auto& c : s.components) {
      CHECK(c.phase >= 0.0);
      CHECK(c.phase < 2.0 * std::numbers::pi);
      CHECK(c.omega == doctest::Approx(2.0 * std::numbers::pi * c.frequency));
    }
  }
}

TEST_CASE("two-hour binning") {
  const SpectrumSpec s = discretize_spectrum(1.0, 10.0, 7200.0, 30.0, 1);
  CHECK(s.df == doctest::Approx(1.389e-4).epsilon(1e-3));
  CHECK(s.components.size() == 921);
  CHECK(s.f_max == doctest::Approx(0.1610).epsilon(1e-3));
  CHECK(1.0 / s.f_max == doctest::Approx(6.21).epsilon(1e-3));
  const double k_cut = oracle::airy_wavenumber_bisection(2.0 * std::numbers::pi * s.f_max, 30.0, kGravity);
  CHECK(k_cut * 30.0 == doctest::Approx(std::numbers::pi).epsilon(1e-9));
  CHECK(spectrum_bin_count(0.0, 1.0, 0.25) == 5);
  CHECK(error_kind([] { discretize_spectrum(1.0, 10.0, 100.0, 30.0, 1); }) == ErrorKind::Resolution);
}

TEST_CASE("phases depend only on the bin and seed") {
  const SpectrumSpec a = discretize_spectrum(1.0, 10.0, 7200.0, 30.0, 9);
  const SpectrumSpec b = discretize_spectrum(4.0, 16.0, 7200.0, 30.0, 9);
  const SpectrumSpec c = discretize_spectrum(1.0, 10.0, 7200.0, 30.0, 10);
  REQUIRE(a.components.size() == b.components.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    CHECK(a.components[i].phase == b.components[i].phase);
    any_diff = any_diff || a.components[i].phase != c.components[i].phase;
  }
  CHECK(any_diff);
  const SpectrumSpec calm = discretize_spectrum(0.0, 10.0, 7200.0, 30.0, 9);
  for (const auto& comp : calm.components) CHECK(comp.amplitude == 0.0);
}

TEST_CASE("Airy wavenumber matches the bisection oracle") {
  for (double period : {4.0, 6.21, 8.0, 12.0, 20.0}) {
    for (double depth : {5.0, 30.0}) {
      const double w = 2.0 * std::numbers::pi / period;
      CHECK(airy_wavenumber(w, depth) ==
            doctest::Approx(oracle::airy_wavenumber_bisection(w, depth, kGravity)).epsilon(1e-11));
    }
  }
  CHECK(frequency_for_kh(std::numbers::pi, 30.0) == doctest::Approx(0.1610).epsilon(1e-3));
}

TEST_CASE("Nwogu dispersion approaches Airy in shallow water") {
  const double h = 30.0;
  for (double kh : {0.1, 0.5, 1.0, 2.0, std::numbers::pi}) {
    const double k = kh / h;
    const double airy = std::sqrt(kGravity * k * std::tanh(kh));
    CHECK(std::abs(nwogu_omega(k, h) - airy) / airy < 0.01);
    const double dk = 1e-6 * k;
    const double cg = (nwogu_omega(k + dk, h) - nwogu_omega(k - dk, h)) / (2.0 * dk);
    CHECK(nwogu_group_velocity(k, h) == doctest::Approx(cg).epsilon(1e-6));
  }
}

TEST_CASE("wavemaker source") {
  SpectrumSpec spec;
  spec.depth = 30.0;
  WaveComponent c;
  c.amplitude = 0.1;
  c.frequency = 0.1;
  c.omega = 2.0 * std::numbers::pi * 0.1;
  c.wavenumber = airy_wavenumber(c.omega, 30.0);
  c.phase = 0.3;
  spec.components = {c};
  const Wavemaker wm(spec, 500.0, 40.0);
  // k x - w t + phi = pi/2 at x = 500.
  const double t = (c.wavenumber * 500.0 + c.phase - 0.5 * std::numbers::pi) / c.omega;
  CHECK(std::abs(wm.source(500.0, t)) < 1e-12);
  CHECK(wm.source(500.0 + 4.0 * 40.0, 0.0) == 0.0);
  CHECK(wm.gains()[0] ==
        doctest::Approx(2.0 * 0.1 * nwogu_group_velocity(c.wavenumber, 30.0) / (40.0 * std::sqrt(std::numbers::pi))));

  const SpectrumSpec full = discretize_spectrum(1.0, 10.0, 7200.0, 30.0, 2);
  const Wavemaker sea(full, 500.0, 50.0);
  double scale = 0.0;
  for (double g : sea.gains()) scale += g;
  for (double x : {470.0, 500.0, 555.0}) {
    for (double t0 : {0.0, 123.4, 1000.0}) {
      CHECK(std::abs(sea.source(x, t0) - sea.source(x, t0 + 7200.0)) < 1e-9 * scale);
    }
  }

  Wavemaker bound = sea;
  bound.bind_grid(5.0, 800);
  std::vector<double> field;
  bound.fill(field, 321.0);
  REQUIRE(field.size() == 800);
  for (int j : {0, 90, 100, 110, 799}) {
    CHECK(field[j] == doctest::Approx(sea.source((j + 0.5) * 5.0, 321.0)).epsilon(1e-9).scale(scale));
  }
}
