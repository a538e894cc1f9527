#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dscfq/agent.hpp"
#include "dscfq/sched.hpp"
#include "dscfq/timing.hpp"

namespace dscfq::engine {

struct FixedAlpha {
  double alpha = 0.04;
};

/// Additive-increase controller settings. When beta <= 0 it is derived at
/// setup from gamma and the target slot probabilities, see
/// analysis::derive_beta.
struct AdaptiveAlpha {
  double alpha0 = 0.2;
  double gamma = 0.0;  // <= 0 selects 1e-4 * alpha0
  double beta = 0.0;
  double alpha_min = 1e-4;
  double alpha_max = 1.0;
};

using AlphaPolicy = std::variant<FixedAlpha, AdaptiveAlpha>;

struct Scenario {
  std::vector<core::AgentSpec> agents;
  TimingParams timing;
  sched::SchedulerKind scheduler = sched::SchedulerKind::Dscfq;
  AlphaPolicy alpha_policy = FixedAlpha{};
  std::int32_t branch_factor = 2;  // splitting-algorithm interval width m
  std::int32_t cw_min = 15;
  std::int32_t cw_max = 1023;
  Tick duration = 0;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument with the offending field named.
void validate_scenario(const Scenario& s);

bool alpha_is_adaptive(const AlphaPolicy& p);
double initial_alpha(const AlphaPolicy& p);

/// The bundled saturated scenario: ten always-backlogged agents with
/// weights 10,10,10,8,8,8,2,2,1,1, uniform 1024..3008 byte packets
/// (mean 2016) and default timing.
Scenario default_scenario();

}  // namespace dscfq::engine
