#pragma once

#include <string>
#include <vector>

namespace acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

Result readout_oracle();
Result spectral_oracle();
Result reservoir_equivalence();
Result topology_scaling();
Result flume_balance();
Result flume_dispersion();
Result spectrum_bookkeeping();

/// Criteria 8 and 9. Gauge files are synthesised into `work_dir` (reused when
/// present); the full desk-scale sweep runs twice on `jobs` threads.
std::vector<Result> sweep_criteria(const std::string& work_dir, int jobs);

/// "[PASS] 3 reservoir equivalence: ... (0.1 s)"
std::string format(const Result& r);

}  // namespace acceptance
