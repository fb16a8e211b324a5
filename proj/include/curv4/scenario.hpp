#pragma once

#include <string>

namespace curv4 {

struct ScenarioOptions {
  std::string out_dir = ".";
  int threads = 1;
  bool verbose = false;
};

/// Parses a scenario config (JSON), runs the requested task, and writes the
/// report files under out_dir.  Throws ConfigError for schema problems and
/// NumericDomainError for numerical-domain failures; the CLI maps these to
/// exit codes 2 and 3.  Returns a one-line human-readable summary.
std::string run_scenario(const std::string& config_path, const ScenarioOptions& opts = {});

/// Same, but from an in-memory JSON document (used by tests).
std::string run_scenario_text(const std::string& config_text, const ScenarioOptions& opts = {});

}  // namespace curv4
