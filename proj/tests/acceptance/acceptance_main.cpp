#include "criteria.hpp"

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

int main(int argc, char** argv) {
  const std::string work_dir = argc > 1 ? argv[1] : "acceptance_work";
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WAVECHO_JOBS")) jobs = std::atoi(env);
  if (jobs < 1) jobs = 1;

  using acceptance::Result;
  std::vector<std::function<std::vector<Result>()>> suites = {
      [] { return std::vector<Result>{acceptance::readout_oracle()}; },
      [] { return std::vector<Result>{acceptance::spectral_oracle()}; },
      [] { return std::vector<Result>{acceptance::reservoir_equivalence()}; },
      [] { return std::vector<Result>{acceptance::topology_scaling()}; },
      [] { return std::vector<Result>{acceptance::flume_balance()}; },
      [] { return std::vector<Result>{acceptance::flume_dispersion()}; },
      [] { return std::vector<Result>{acceptance::spectrum_bookkeeping()}; },
      [&] { return acceptance::sweep_criteria(work_dir, jobs); },
  };

  int failures = 0;
  int first_id = 1;
  for (auto& suite : suites) {
    std::vector<Result> results;
    try {
      results = suite();
    } catch (const std::exception& e) {
      const std::string what = std::string("exception: ") + e.what();
      results = {Result{first_id, "criterion", false, what, 0.0}};
      if (first_id == 8) results.push_back(Result{9, "criterion", false, what, 0.0});
    }
    for (const auto& r : results) {
      std::printf("%s\n", acceptance::format(r).c_str());
      std::fflush(stdout);
      if (!r.pass) ++failures;
      first_id = r.id + 1;
    }
  }
  std::printf("%d of 9 acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
