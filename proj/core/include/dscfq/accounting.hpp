#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dscfq/agent.hpp"

namespace dscfq::core {

/// Outcome of one generalized slot. A generalized slot is either a single
/// idle slot, or a busy period together with the one trailing idle slot that
/// backlogged agents spend re-sensing the medium.
enum class SlotKind { Idle, Success, Collision };

/// Network-wide virtual time. The shared clock advances by 1/alpha per idle
/// generalized slot and is frozen during busy slots. Idle slots are counted
/// exactly in an integer so that fixed-alpha readings are a single division.
class NetworkVirtualClock {
 public:
  explicit NetworkVirtualClock(double alpha);

  /// Counts the slot iff kind == Idle.
  void advance(SlotKind kind);

  /// Installs a new scaling factor (adaptive runs). Readings switch to an
  /// accumulated sum because idle slots no longer share one alpha.
  void set_alpha(double alpha);

  double value() const;
  double alpha() const { return alpha_; }
  std::int64_t idle_slot_count() const { return idle_slots_; }

 private:
  double alpha_;
  double initial_alpha_;
  bool alpha_changed_ = false;
  std::int64_t idle_slots_ = 0;
  double accumulated_ = 0.0;
};

inline void advance_virtual_time(NetworkVirtualClock& clock, SlotKind kind) {
  clock.advance(kind);
}

/// Per-agent service accounting: cumulative delivered service, the agent's
/// virtual time, and backlog intervals.
///
/// While an agent is backlogged its virtual time follows its normalized
/// service w_k = W_k / phi_k. While it is absent (empty queue) its virtual
/// time follows the network clock instead, so the service deviation
/// delta_k = v - v_k stays constant between a departure that empties the
/// queue and the next arrival.
class ServiceLedger {
 public:
  explicit ServiceLedger(const std::vector<AgentSpec>& agents);

  std::size_t agent_count() const { return accounts_.size(); }

  /// Credits one departed packet, atomically at its departure tick.
  /// length_units is the packet length in scheduler units (bytes).
  void record_service(AgentId agent, std::int64_t length_units);

  /// Advances an absent agent's virtual time by a network virtual-time
  /// interval. Throws if the agent is currently backlogged. The caller owns
  /// keeping absent agents in step with the medium (one call per idle slot,
  /// or one per absence with the summed interval).
  void sync_absent_agent(AgentId agent, double v_interval);

  void mark_backlogged(AgentId agent, Tick at);
  void mark_absent(AgentId agent, Tick at);
  bool backlogged(AgentId agent) const;

  std::int64_t cumulative_service_bits(AgentId agent) const;
  double normalized_service(AgentId agent) const;   // w_k
  double agent_virtual_time(AgentId agent) const;   // v_k
  double service_deviation(AgentId agent, double v_now) const;  // v - v_k

  /// Closed and, if still open, the current backlog interval.
  /// An open interval is reported as (start, end=-1).
  const std::vector<std::pair<Tick, Tick>>& backlog_intervals(AgentId agent) const;

 private:
  struct Account {
    double weight = 1.0;
    std::int64_t service_bits = 0;  // exact, 8 bits per length unit
    bool backlogged = false;
    double absent_v_offset = 0.0;  // virtual time gained while absent
    std::vector<std::pair<Tick, Tick>> intervals;
  };

  const Account& at(AgentId agent) const;
  Account& at(AgentId agent);

  std::vector<Account> accounts_;
};

inline double service_deviation(const ServiceLedger& ledger,
                                const NetworkVirtualClock& clock,
                                AgentId agent) {
  return ledger.service_deviation(agent, clock.value());
}

/// Bits carried by one scheduler length unit (a byte).
inline constexpr std::int64_t kBitsPerLengthUnit = 8;

}  // namespace dscfq::core
