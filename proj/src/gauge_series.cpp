#include "wavecho/gauge_series.hpp"

#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>

namespace wavecho {

void write_gauge_csv(std::ostream& out, const GaugeSeries& s) {
  out << "# Hs," << csv::format_number(s.hs) << '\n';
  out << "# Tp," << csv::format_number(s.tp) << '\n';
  out << "# seed," << s.seed << '\n';
  out << "# dx," << csv::format_number(s.dx) << '\n';
  out << "# gauge_x," << csv::format_number(s.gauge_x) << '\n';
  out << "# sample_rate," << csv::format_number(s.sample_rate) << '\n';
  out << "# start_time," << csv::format_number(s.start_time) << '\n';
  out << "t,eta\n";
  for (std::size_t i = 0; i < s.eta.size(); ++i) {
    out << csv::format_number(s.time_of(i)) << ',' << csv::format_number(s.eta[i]) << '\n';
  }
}

GaugeSeries read_gauge_csv(std::istream& in) {
  GaugeSeries s;
  std::map<std::string, std::function<void(std::string_view)>> setters{
      {"Hs", [&](std::string_view v) { s.hs = csv::parse_number(v); }},
      {"Tp", [&](std::string_view v) { s.tp = csv::parse_number(v); }},
      {"seed", [&](std::string_view v) { s.seed = std::stoull(std::string(csv::trim(v))); }},
      {"dx", [&](std::string_view v) { s.dx = csv::parse_number(v); }},
      {"gauge_x", [&](std::string_view v) { s.gauge_x = csv::parse_number(v); }},
      {"sample_rate", [&](std::string_view v) { s.sample_rate = csv::parse_number(v); }},
      {"start_time", [&](std::string_view v) { s.start_time = csv::parse_number(v); }},
  };
  std::string line;
  bool in_body = false;
  while (std::getline(in, line)) {
    const auto text = csv::trim(line);
    if (text.empty()) continue;
    if (!in_body) {
      if (text.front() == '#') {
        const auto cells = csv::split(text.substr(1));
        if (cells.size() != 2) throw Error(ErrorKind::Io, "gauge file: malformed header row");
        const auto key = std::string(csv::trim(cells[0]));
        const auto it = setters.find(key);
        if (it == setters.end()) throw Error(ErrorKind::Io, "gauge file: unknown header " + key);
        it->second(cells[1]);
        continue;
      }
      if (text != "t,eta") throw Error(ErrorKind::Io, "gauge file: expected 't,eta' header");
      in_body = true;
      continue;
    }
    const auto cells = csv::split(text);
    if (cells.size() != 2) throw Error(ErrorKind::Io, "gauge file: malformed data row");
    s.eta.push_back(csv::parse_number(cells[1]));
  }
  if (!in_body) throw Error(ErrorKind::Io, "gauge file: no data section");
  if (!(s.sample_rate > 0.0)) throw Error(ErrorKind::Io, "gauge file: bad sample rate");
  return s;
}

void save_gauge_csv(const std::string& path, const GaugeSeries& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  write_gauge_csv(out, series);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

GaugeSeries load_gauge_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  return read_gauge_csv(in);
}

double zero_crossing_hs(const std::vector<double>& eta) {
  if (eta.size() < 3) return 0.0;
  const double mean = std::accumulate(eta.begin(), eta.end(), 0.0) / eta.size();
  std::vector<double> heights;
  std::size_t start = eta.size();
  double hi = -1e300, lo = 1e300;
  for (std::size_t i = 1; i < eta.size(); ++i) {
    const double a = eta[i - 1] - mean;
    const double b = eta[i] - mean;
    if (a < 0.0 && b >= 0.0) {
      if (start < eta.size()) heights.push_back(hi - lo);
      start = i;
      hi = -1e300;
      lo = 1e300;
    }
    if (start < eta.size()) {
      hi = std::max(hi, b);
      lo = std::min(lo, b);
    }
  }
  if (heights.empty()) return 0.0;
  std::sort(heights.begin(), heights.end(), std::greater<>());
  const std::size_t third = std::max<std::size_t>(1, heights.size() / 3);
  return std::accumulate(heights.begin(), heights.begin() + third, 0.0) / third;
}

}  // namespace wavecho
