#pragma once

#include <cstdint>
#include <string>

#include "calderon/suite.hpp"

namespace calderon {

/// The convention choices every report must carry (trace coordinates, the
/// conjugation reconciling the textbook Calderon matrix, mode-0 handling,
/// exterior complement), as a JSON object string.
std::string convention_flags_json();

/// Suite results as JSON; timings live in a separate "metadata" object so
/// byte-level determinism can be checked on everything else.
std::string suite_report_json(const SuiteResult& result, bool include_timings);

/// Small canonical report whose bytes must be identical across runs with the
/// same seed (the determinism probe).
std::string determinism_probe_json(std::uint64_t seed);

std::string tool_version();

}  // namespace calderon
