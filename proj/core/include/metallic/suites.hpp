#pragma once

#include <string>
#include <vector>

#include "metallic/manifold.hpp"

namespace metallic {

struct RunConfig {
  std::vector<std::string> suites{"all"};  // core, connections, generalized, lifts, all
  int samples = 200;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;  // base tolerance; per-check tolerances scale off it
};

struct TimedReport {
  CheckReport report;
  double wall_ms = 0.0;
  std::string error;  // set when the check raised instead of reporting
};

bool valid_suite_name(const std::string& name);

// Runs the selected check suites; reports come back sorted by check id.
std::vector<TimedReport> run_suites(const ChartManifold& m, const RunConfig& config);

}  // namespace metallic
