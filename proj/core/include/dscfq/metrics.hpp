#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dscfq/trace.hpp"

namespace dscfq::metrics {

using engine::Tick;
using engine::Trace;

/// Jain index over weight-normalized throughputs: (sum x)^2 / (N sum x^2)
/// with x_k = T_k / phi_k. Empty when every throughput is zero.
std::optional<double> jain_fairness_index(const std::vector<double>& throughput,
                                          const std::vector<double>& weights);

struct ThroughputReport {
  Tick from = 0;
  Tick to = 0;
  std::vector<double> bits_per_second;  // per agent
  std::vector<std::int64_t> bits;
  double payload_fraction = 0.0;  // empirical saturation throughput
};

/// Delivered payload over (from, to], per agent and as a medium-time
/// fraction.
ThroughputReport per_agent_throughput(const Trace& trace, Tick from, Tick to);

/// Sliding Window Method: fairness index over every window of `window`
/// consecutive departures (slide one departure a time), each window's
/// throughput taken over its wall-clock span. Throws std::invalid_argument
/// when the trace holds fewer departures than the window.
struct FairnessWindowSeries {
  std::int64_t window = 0;
  std::vector<double> index;  // one per window position
  double mean = 0.0;
};
FairnessWindowSeries sliding_window_fairness(const Trace& trace,
                                             std::int64_t window);

enum class CheckKind {
  DepartureDeviation,   // deviation at each departure in (-1/alpha, 0]
  DeviationEnvelope,    // backlogged deviation within [-1/alpha, Lmax/phi]
  PairwiseServiceGap,   // sampled co-backlogged intervals within the bound
  CompensationIdentity, // stored compensation equals measured deviation
};
const char* to_string(CheckKind k);

struct Violation {
  CheckKind check = CheckKind::DepartureDeviation;
  Tick tick = 0;
  core::AgentId agent = -1;
  core::AgentId other = -1;  // PairwiseServiceGap only
  double observed = 0.0;
  double bound = 0.0;
};

/// Violations are asserted failures; advisories are the same checks run on
/// traces whose scheduler or alpha policy carries no guarantee (baselines,
/// adaptive alpha), reported for inspection only.
struct ViolationReport {
  std::vector<Violation> violations;
  std::vector<Violation> advisories;
  double max_pairwise_gap_ratio = 0.0;  // max observed |gap| / bound
  std::int64_t pairwise_samples = 0;

  bool clean() const { return violations.empty(); }
};

/// Replays the trace against the accounting invariants with a tolerance of
/// 1e-9 service units. For DSCFQ at fixed alpha all checks are asserted;
/// pairwise gaps are sampled over departure-tick pairs (capped) plus seeded
/// random pairs.
ViolationReport validate_trace(const Trace& trace);

std::string report_json(const ViolationReport& report);

}  // namespace dscfq::metrics
