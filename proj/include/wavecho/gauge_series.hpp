#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wavecho {

/// Fixed-rate free-surface record at one gauge.
struct GaugeSeries {
  double hs = 0.0;           // target significant wave height, m
  double tp = 0.0;           // target peak period, s
  std::uint64_t seed = 0;
  double dx = 0.0;           // solver cell size, m
  double gauge_x = 0.0;      // m
  double sample_rate = 1.0;  // Hz
  double start_time = 0.0;   // simulation time of the first sample, s
  std::vector<double> eta;   // m

  std::size_t size() const { return eta.size(); }
  double time_of(std::size_t i) const { return static_cast<double>(i) / sample_rate; }
};

// "# key,value" header rows followed by "t,eta" rows. Numbers are written in
// shortest round-trip form, so read(write(s)) == s exactly.
void write_gauge_csv(std::ostream& out, const GaugeSeries& series);
GaugeSeries read_gauge_csv(std::istream& in);

void save_gauge_csv(const std::string& path, const GaugeSeries& series);
GaugeSeries load_gauge_csv(const std::string& path);

/// Mean of the highest third of zero-up-crossing wave heights.
double zero_crossing_hs(const std::vector<double>& eta);

}  // namespace wavecho
