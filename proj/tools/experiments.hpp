#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dscfq/analysis.hpp"
#include "dscfq/scenario.hpp"

namespace dscfq::tools {

enum class ExperimentKind { Run, SweepAlpha, Adaptive, Compare, Analyze, Validate };
const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

/// A fully resolved experiment: scenario with defaults applied plus the
/// orchestration knobs. Built from a JSON config file and finished off by
/// command line overrides.
struct ExperimentConfig {
  engine::Scenario scenario = engine::default_scenario();
  ExperimentKind experiment = ExperimentKind::Run;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<double> alpha_grid;       // sweep_alpha / compare; empty = built-in
  std::vector<std::int64_t> windows = {30, 50, 100, 1000};
  analysis::NbarFormula nbar = analysis::NbarFormula::Exact;
  std::filesystem::path out_dir = "out";
  std::filesystem::path trace_path;     // validate input
  bool strict = false;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a JSON config. Every key is optional; a missing scenario selects
/// the bundled saturated default, and a scenario that omits timing or
/// contention fields gets the defaults injected. Throws ConfigError naming
/// the offending field.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Grids the experiments fall back to when the config gives none.
std::vector<double> default_sweep_grid();
std::vector<double> default_compare_grid();

/// Checks grid ordering, seeds and scenario validity. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

struct ManifestEntry {
  std::string name;       // path relative to out_dir
  std::uint64_t digest = 0;
  std::uintmax_t bytes = 0;
};

struct ResultBundle {
  std::filesystem::path out_dir;
  std::vector<ManifestEntry> files;     // excludes the manifest itself
  std::uint64_t config_digest = 0;
  std::int64_t violations = 0;          // asserted invariant violations
  std::string manifest_path;
};

/// Runs the configured experiment, writes its outputs plus manifest.json
/// under out_dir, and returns the written set. Identical config and seeds
/// give identical digests.
ResultBundle run_experiment(const ExperimentConfig& config);

/// FNV-1a, the digest used in manifests and determinism checks.
std::uint64_t fnv1a(const std::string& data);
std::string digest_hex(std::uint64_t digest);

}  // namespace dscfq::tools
