#pragma once

#include <functional>
#include <vector>

#include "dscfq/trace.hpp"

namespace dscfq::engine {

/// Runs the scenario to its configured duration and returns the full trace.
///
/// The medium advances in generalized slots. Backlogged class II agents
/// decrement their tags once per idle slot, after one initial sensing slot,
/// and are frozen while the medium is busy; a counter reaching zero
/// transmits at the next slot boundary. Simultaneous transmissions collide;
/// under DSCFQ and Type II the colliding set resolves immediately via the
/// splitting algorithm inside the same generalized slot, so every collision
/// slot ends with all its contenders served.
Trace run_simulation(const Scenario& scenario);

struct CollisionContender {
  core::AgentId agent = 0;
  std::int64_t length_units = 0;
  std::int64_t seq = 0;  // contender's head packet index, for trace events
  sched::AgentSchedState* state = nullptr;
  core::SplitMix64* pulse_rng = nullptr;
};

/// Outcome of one collision generalized slot, exposed for direct testing.
struct CollisionPhaseResult {
  GeneralizedSlotRecord slot;
  std::vector<core::AgentId> departures;  // in service order; empty for Type I
};

/// Resolves one collision starting at `start`. Contender states are updated
/// in place (collision counters; BEB windows for Type I, which redraws and
/// defers instead of resolving). Requires >= 2 contenders, all of one
/// scheduler kind. TxStart/TxEnd/CrpPulse events are appended to `events`
/// when non-null; `on_departure` (may be empty) runs once per delivered
/// packet, at its departure tick, before the phase continues.
CollisionPhaseResult collision_phase(
    std::vector<CollisionContender>& contenders, const TimingParams& timing,
    std::int32_t branch_factor, Tick start, std::int64_t slot_index,
    double v_snapshot, std::vector<TraceEvent>* events,
    const std::function<void(core::AgentId, Tick)>& on_departure);

}  // namespace dscfq::engine
