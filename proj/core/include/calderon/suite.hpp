#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace calderon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteResult {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  double total_seconds = 0.0;
};

/// Runs the full acceptance battery. `quick` trims truncations for use as a
/// smoke tier; the acceptance gate always runs with quick = false.
SuiteResult run_acceptance_suite(std::uint64_t seed, bool quick = false);

std::string format_criterion_line(const CriterionResult& c);

}  // namespace calderon
