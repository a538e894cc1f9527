#include "dscfq/accounting.hpp"

#include <stdexcept>

namespace dscfq::core {

NetworkVirtualClock::NetworkVirtualClock(double alpha)
    : alpha_(alpha), initial_alpha_(alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("virtual clock: alpha must be positive");
  }
}

void NetworkVirtualClock::advance(SlotKind kind) {
  if (kind != SlotKind::Idle) return;
  ++idle_slots_;
  if (alpha_changed_) {
    accumulated_ += 1.0 / alpha_;
  }
}

void NetworkVirtualClock::set_alpha(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("virtual clock: alpha must be positive");
  }
  if (alpha == alpha_) return;
  if (!alpha_changed_) {
    // catch up the running sum before leaving the single-division regime
    accumulated_ = static_cast<double>(idle_slots_) / alpha_;
    alpha_changed_ = true;
  }
  alpha_ = alpha;
}

double NetworkVirtualClock::value() const {
  if (alpha_changed_) return accumulated_;
  return static_cast<double>(idle_slots_) / alpha_;
}

ServiceLedger::ServiceLedger(const std::vector<AgentSpec>& agents) {
  if (agents.empty()) {
    throw std::invalid_argument("ledger: need at least one agent");
  }
  accounts_.reserve(agents.size());
  for (const AgentSpec& spec : agents) {
    if (!(spec.weight > 0.0)) {
      throw std::invalid_argument("ledger: weights must be positive");
    }
    Account acc;
    acc.weight = spec.weight;
    accounts_.push_back(std::move(acc));
  }
}

const ServiceLedger::Account& ServiceLedger::at(AgentId agent) const {
  if (agent < 0 || static_cast<std::size_t>(agent) >= accounts_.size()) {
    throw std::out_of_range("ledger: unknown agent");
  }
  return accounts_[static_cast<std::size_t>(agent)];
}

ServiceLedger::Account& ServiceLedger::at(AgentId agent) {
  return const_cast<Account&>(
      static_cast<const ServiceLedger*>(this)->at(agent));
}

void ServiceLedger::record_service(AgentId agent, std::int64_t length_units) {
  if (length_units < 0) {
    throw std::invalid_argument("ledger: negative service");
  }
  at(agent).service_bits += length_units * kBitsPerLengthUnit;
}

void ServiceLedger::sync_absent_agent(AgentId agent, double v_interval) {
  Account& acc = at(agent);
  if (acc.backlogged) {
    throw std::logic_error("ledger: agent is backlogged, not absent");
  }
  acc.absent_v_offset += v_interval;
}

void ServiceLedger::mark_backlogged(AgentId agent, Tick at_tick) {
  Account& acc = at(agent);
  if (acc.backlogged) return;
  acc.backlogged = true;
  acc.intervals.emplace_back(at_tick, Tick{-1});
}

void ServiceLedger::mark_absent(AgentId agent, Tick at_tick) {
  Account& acc = at(agent);
  if (!acc.backlogged) return;
  acc.backlogged = false;
  acc.intervals.back().second = at_tick;
}

bool ServiceLedger::backlogged(AgentId agent) const {
  return at(agent).backlogged;
}

std::int64_t ServiceLedger::cumulative_service_bits(AgentId agent) const {
  return at(agent).service_bits;
}

double ServiceLedger::normalized_service(AgentId agent) const {
  const Account& acc = at(agent);
  // exact integer bits, two scalings; units are scheduler units per weight
  return static_cast<double>(acc.service_bits) /
         (static_cast<double>(kBitsPerLengthUnit) * acc.weight);
}

double ServiceLedger::agent_virtual_time(AgentId agent) const {
  return normalized_service(agent) + at(agent).absent_v_offset;
}

double ServiceLedger::service_deviation(AgentId agent, double v_now) const {
  return v_now - agent_virtual_time(agent);
}

const std::vector<std::pair<Tick, Tick>>& ServiceLedger::backlog_intervals(
    AgentId agent) const {
  return at(agent).intervals;
}

}  // namespace dscfq::core
