#pragma once

#include <cstdint>
#include <vector>

#include "dscfq/engine.hpp"
#include "dscfq/scenario.hpp"

namespace testutil {

// One saturated agent, fixed-length packets, fixed scaling factor.
inline dscfq::engine::Scenario single_agent(double weight, std::int64_t units,
                                            double alpha,
                                            dscfq::engine::Tick duration) {
  dscfq::engine::Scenario sc;
  dscfq::core::AgentSpec a;
  a.id = "a0";
  a.weight = weight;
  a.lengths = dscfq::core::PacketLengthModel::fixed(units);
  sc.agents.push_back(a);
  sc.alpha_policy = dscfq::engine::FixedAlpha{alpha};
  sc.duration = duration;
  sc.seed = 7;
  return sc;
}

// n identical saturated agents; equal weights and fixed equal lengths give
// identical backoff tags, so every busy slot is a collision.
inline dscfq::engine::Scenario lockstep_agents(int n, dscfq::engine::Tick duration) {
  dscfq::engine::Scenario sc;
  for (int i = 0; i < n; ++i) {
    dscfq::core::AgentSpec a;
    a.id = "a" + std::to_string(i);
    a.weight = 8.0;
    a.lengths = dscfq::core::PacketLengthModel::fixed(2016);
    sc.agents.push_back(a);
  }
  sc.alpha_policy = dscfq::engine::FixedAlpha{0.04};
  sc.duration = duration;
  sc.seed = 11;
  return sc;
}

inline std::vector<dscfq::engine::TraceEvent> departures_of(
    const dscfq::engine::Trace& trace, dscfq::core::AgentId agent = -1) {
  std::vector<dscfq::engine::TraceEvent> out;
  for (const auto& e : trace.events) {
    if (e.kind != dscfq::engine::TraceEventKind::Departure) continue;
    if (agent >= 0 && e.agent != agent) continue;
    out.push_back(e);
  }
  return out;
}

}  // namespace testutil
