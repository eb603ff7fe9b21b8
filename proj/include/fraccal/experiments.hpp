// experiments.hpp — the batch runner behind the CLI: strict JSON config
// validation, named-experiment dispatch, CSV/JSON artifact output with a
// hashed manifest.  All randomness flows from the config seed through
// named counter-based streams.

#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "fraccal/kernel.hpp"
#include "fraccal/rng.hpp"

namespace fraccal {

struct ValidationIssue {
  std::string path;     // JSON-pointer-ish location
  std::string message;  // violated constraint
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  nlohmann::json to_json() const;
};

// Schema-only validation, no computation.
ValidationReport validate_config_json(const nlohmann::json& cfg);
ValidationReport validate_config_file(const std::string& path);

// Executes the configured experiment.  Returns the process exit code:
// 0 success, 2 schema violation, 3 numerical precondition failure,
// 4 internal tolerance breach.  On failure a machine-readable error JSON
// is printed to stderr.
int run_config_file(const std::string& path);

// Kernel construction from a config spec (exposed for tests).
Kernel kernel_from_spec(const nlohmann::json& spec, const GridSpec& grid);

// Deterministic random built kernel for randomized experiment sweeps:
// draws a builder family and parameters from the stream, then rescales to
// an operator norm uniform in [0.3, 1] * max_norm.
Kernel random_built_kernel(CounterRng& rng, const GridSpec& grid, double max_norm);

}  // namespace fraccal
