#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dscfq/accounting.hpp"
#include "dscfq/scenario.hpp"

namespace dscfq::engine {

enum class TraceEventKind {
  SlotStart,
  TxStart,
  TxEndSuccess,
  TxEndCollision,
  Departure,
  CrpPulse,
  AlphaUpdate,
};

const char* to_string(TraceEventKind k);
const char* to_string(core::SlotKind k);
const char* to_string(sched::SchedulerKind k);

struct TraceEvent {
  Tick tick = 0;
  TraceEventKind kind = TraceEventKind::SlotStart;
  core::AgentId agent = -1;
  std::int64_t seq = 0;          // per-agent packet index, 1-based
  std::int64_t length_bits = 0;  // payload bits (Departure), pulse slots (CrpPulse)
  std::int64_t slot_index = -1;
  double v = 0.0;                // network virtual time snapshot
  double delta = std::numeric_limits<double>::quiet_NaN();     // departures
  double eps_next = std::numeric_limits<double>::quiet_NaN();  // departures, DSCFQ
  double alpha_old = 0.0;        // AlphaUpdate only
  double alpha_new = 0.0;
};

struct GeneralizedSlotRecord {
  std::int64_t index = 0;
  core::SlotKind kind = core::SlotKind::Idle;
  Tick start = 0;
  Tick duration = 0;
  double alpha = 0.0;  // scaling factor in force during the slot
  std::vector<core::AgentId> contenders;
  core::AgentId winner = -1;  // Success slots only
  std::int32_t crp_rounds = 0;
};

struct AgentTraceStats {
  std::int64_t departures = 0;
  std::int64_t service_bits = 0;
  std::int64_t collisions_entered = 0;
};

struct Trace {
  Scenario scenario;
  std::vector<TraceEvent> events;
  std::vector<GeneralizedSlotRecord> slots;
  std::vector<AgentTraceStats> agent_stats;
  std::vector<std::vector<std::pair<Tick, Tick>>> backlog_intervals;
  Tick end_tick = 0;
  double final_v = 0.0;
  double final_alpha = 0.0;
};

struct TraceSummary {
  Tick span = 0;
  std::int64_t departures = 0;
  std::int64_t idle_slots = 0;
  std::int64_t success_slots = 0;
  std::int64_t collision_slots = 0;
  double mean_crp_rounds = 0.0;
  double mean_collision_slot_ns = 0.0;  // T_c + resolution + trailing slot
  double payload_fraction = 0.0;        // empirical saturation throughput
  std::vector<double> throughput_bps;   // per agent
  std::vector<std::int64_t> service_bits;
};

TraceSummary summarize(const Trace& trace);

/// One event per row: tick_ns,event,agent,seq,length_bits,slot_index,v,delta.
/// AlphaUpdate rows reuse the v and delta columns for the old and new value.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
std::string trace_csv_string(const Trace& trace);

/// Full-fidelity export including slot records, scenario and backlog
/// intervals; the CSV is lossy by design.
void write_trace_json(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_json(const std::filesystem::path& path);

/// Scenario (de)serialization, shared by the trace format and run configs.
std::string scenario_json_string(const Scenario& s);
Scenario scenario_from_json_string(const std::string& text);

}  // namespace dscfq::engine
