#include "dscfq/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dscfq::engine {

using nlohmann::json;

const char* to_string(TraceEventKind k) {
  switch (k) {
    case TraceEventKind::SlotStart: return "slot_start";
    case TraceEventKind::TxStart: return "tx_start";
    case TraceEventKind::TxEndSuccess: return "tx_end_success";
    case TraceEventKind::TxEndCollision: return "tx_end_collision";
    case TraceEventKind::Departure: return "departure";
    case TraceEventKind::CrpPulse: return "crp_pulse";
    case TraceEventKind::AlphaUpdate: return "alpha_update";
  }
  return "?";
}

const char* to_string(core::SlotKind k) {
  switch (k) {
    case core::SlotKind::Idle: return "idle";
    case core::SlotKind::Success: return "success";
    case core::SlotKind::Collision: return "collision";
  }
  return "?";
}

const char* to_string(sched::SchedulerKind k) {
  switch (k) {
    case sched::SchedulerKind::Dscfq: return "dscfq";
    case sched::SchedulerKind::TypeI: return "type1";
    case sched::SchedulerKind::TypeII: return "type2";
  }
  return "?";
}

namespace {

TraceEventKind event_kind_from_string(const std::string& s) {
  if (s == "slot_start") return TraceEventKind::SlotStart;
  if (s == "tx_start") return TraceEventKind::TxStart;
  if (s == "tx_end_success") return TraceEventKind::TxEndSuccess;
  if (s == "tx_end_collision") return TraceEventKind::TxEndCollision;
  if (s == "departure") return TraceEventKind::Departure;
  if (s == "crp_pulse") return TraceEventKind::CrpPulse;
  if (s == "alpha_update") return TraceEventKind::AlphaUpdate;
  throw std::invalid_argument("trace: unknown event kind " + s);
}

core::SlotKind slot_kind_from_string(const std::string& s) {
  if (s == "idle") return core::SlotKind::Idle;
  if (s == "success") return core::SlotKind::Success;
  if (s == "collision") return core::SlotKind::Collision;
  throw std::invalid_argument("trace: unknown slot kind " + s);
}

sched::SchedulerKind scheduler_from_string(const std::string& s) {
  if (s == "dscfq") return sched::SchedulerKind::Dscfq;
  if (s == "type1") return sched::SchedulerKind::TypeI;
  if (s == "type2") return sched::SchedulerKind::TypeII;
  throw std::invalid_argument("trace: unknown scheduler " + s);
}

// shortest round-trip decimal form, deterministic across runs
void append_double(std::string& out, double x) {
  if (std::isnan(x)) return;  // empty field
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

void append_int(std::string& out, std::int64_t x) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

json length_model_to_json(const core::PacketLengthModel& m) {
  using Kind = core::PacketLengthModel::Kind;
  json j;
  switch (m.kind) {
    case Kind::Fixed:
      j["kind"] = "fixed";
      j["units"] = m.fixed_units;
      break;
    case Kind::Uniform:
      j["kind"] = "uniform";
      j["lo_units"] = m.lo_units;
      j["hi_units"] = m.hi_units;
      break;
    case Kind::TruncatedExponential:
      j["kind"] = "truncated_exponential";
      j["mean_units"] = m.mean_units_param;
      j["max_units"] = m.max_units;
      break;
  }
  return j;
}

core::PacketLengthModel length_model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fixed") {
    return core::PacketLengthModel::fixed(j.at("units").get<std::int64_t>());
  }
  if (kind == "uniform") {
    return core::PacketLengthModel::uniform(j.at("lo_units").get<std::int64_t>(),
                                            j.at("hi_units").get<std::int64_t>());
  }
  if (kind == "truncated_exponential") {
    return core::PacketLengthModel::truncated_exponential(
        j.at("mean_units").get<double>(), j.at("max_units").get<std::int64_t>());
  }
  throw std::invalid_argument("trace: unknown length model " + kind);
}

json timing_to_json(const TimingParams& t) {
  return json{{"data_rate_bps", t.data_rate_bps},
              {"ctrl_rate_bps", t.ctrl_rate_bps},
              {"rts_bits", t.rts_bits},
              {"cts_bits", t.cts_bits},
              {"ack_bits", t.ack_bits},
              {"sigma_ns", t.sigma},
              {"sifs_ns", t.sifs},
              {"propagation_ns", t.propagation},
              {"cts_timeout_ns", t.cts_timeout}};
}

TimingParams timing_from_json(const json& j) {
  TimingParams t;
  t.data_rate_bps = j.value("data_rate_bps", t.data_rate_bps);
  t.ctrl_rate_bps = j.value("ctrl_rate_bps", t.ctrl_rate_bps);
  t.rts_bits = j.value("rts_bits", t.rts_bits);
  t.cts_bits = j.value("cts_bits", t.cts_bits);
  t.ack_bits = j.value("ack_bits", t.ack_bits);
  t.sigma = j.value("sigma_ns", t.sigma);
  t.sifs = j.value("sifs_ns", t.sifs);
  t.propagation = j.value("propagation_ns", t.propagation);
  t.cts_timeout = j.value("cts_timeout_ns", t.cts_timeout);
  return t;
}

json alpha_policy_to_json(const AlphaPolicy& p) {
  if (const auto* fixed = std::get_if<FixedAlpha>(&p)) {
    return json{{"mode", "fixed"}, {"alpha", fixed->alpha}};
  }
  const auto& ad = std::get<AdaptiveAlpha>(p);
  return json{{"mode", "adaptive"},   {"alpha0", ad.alpha0},
              {"gamma", ad.gamma},    {"beta", ad.beta},
              {"alpha_min", ad.alpha_min}, {"alpha_max", ad.alpha_max}};
}

AlphaPolicy alpha_policy_from_json(const json& j) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "fixed") {
    return FixedAlpha{j.at("alpha").get<double>()};
  }
  if (mode == "adaptive") {
    AdaptiveAlpha ad;
    ad.alpha0 = j.value("alpha0", ad.alpha0);
    ad.gamma = j.value("gamma", ad.gamma);
    ad.beta = j.value("beta", ad.beta);
    ad.alpha_min = j.value("alpha_min", ad.alpha_min);
    ad.alpha_max = j.value("alpha_max", ad.alpha_max);
    return ad;
  }
  throw std::invalid_argument("trace: unknown alpha mode " + mode);
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json agents = json::array();
  for (const core::AgentSpec& a : s.agents) {
    agents.push_back(json{{"id", a.id},
                          {"weight", a.weight},
                          {"lengths", length_model_to_json(a.lengths)},
                          {"always_backlogged", a.always_backlogged},
                          {"arrival_rate_pps", a.arrival_rate_pps}});
  }
  return json{{"agents", std::move(agents)},
              {"timing", timing_to_json(s.timing)},
              {"scheduler", to_string(s.scheduler)},
              {"alpha", alpha_policy_to_json(s.alpha_policy)},
              {"branch_factor", s.branch_factor},
              {"cw_min", s.cw_min},
              {"cw_max", s.cw_max},
              {"duration_ns", s.duration},
              {"seed", s.seed}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  for (const json& ja : j.at("agents")) {
    core::AgentSpec a;
    a.id = ja.value("id", std::string{});
    a.weight = ja.value("weight", 1.0);
    if (ja.contains("lengths")) a.lengths = length_model_from_json(ja["lengths"]);
    a.always_backlogged = ja.value("always_backlogged", true);
    a.arrival_rate_pps = ja.value("arrival_rate_pps", 0.0);
    s.agents.push_back(std::move(a));
  }
  if (j.contains("timing")) s.timing = timing_from_json(j["timing"]);
  if (j.contains("scheduler")) {
    s.scheduler = scheduler_from_string(j["scheduler"].get<std::string>());
  }
  if (j.contains("alpha")) s.alpha_policy = alpha_policy_from_json(j["alpha"]);
  s.branch_factor = j.value("branch_factor", s.branch_factor);
  s.cw_min = j.value("cw_min", s.cw_min);
  s.cw_max = j.value("cw_max", s.cw_max);
  s.duration = j.value("duration_ns", s.duration);
  s.seed = j.value("seed", s.seed);
  return s;
}

std::string scenario_json_string(const Scenario& s) {
  return scenario_to_json(s).dump(2);
}

Scenario scenario_from_json_string(const std::string& text) {
  return scenario_from_json(json::parse(text));
}

TraceSummary summarize(const Trace& trace) {
  TraceSummary out;
  out.span = trace.end_tick;
  std::int64_t payload_bits = 0;
  for (const TraceEvent& e : trace.events) {
    if (e.kind == TraceEventKind::Departure) {
      ++out.departures;
      payload_bits += e.length_bits;
    }
  }
  std::int64_t crp_rounds = 0;
  std::int64_t collision_ns = 0;
  for (const GeneralizedSlotRecord& slot : trace.slots) {
    switch (slot.kind) {
      case core::SlotKind::Idle: ++out.idle_slots; break;
      case core::SlotKind::Success: ++out.success_slots; break;
      case core::SlotKind::Collision:
        ++out.collision_slots;
        crp_rounds += slot.crp_rounds;
        collision_ns += slot.duration;
        break;
    }
  }
  if (out.collision_slots > 0) {
    out.mean_crp_rounds =
        static_cast<double>(crp_rounds) / static_cast<double>(out.collision_slots);
    out.mean_collision_slot_ns = static_cast<double>(collision_ns) /
                                 static_cast<double>(out.collision_slots);
  }
  out.service_bits.reserve(trace.agent_stats.size());
  out.throughput_bps.reserve(trace.agent_stats.size());
  for (const AgentTraceStats& st : trace.agent_stats) {
    out.service_bits.push_back(st.service_bits);
    out.throughput_bps.push_back(
        out.span > 0 ? static_cast<double>(st.service_bits) * 1e9 /
                           static_cast<double>(out.span)
                     : 0.0);
  }
  if (out.span > 0) {
    out.payload_fraction =
        static_cast<double>(payload_bits) * 1e9 /
        (static_cast<double>(trace.scenario.timing.data_rate_bps) *
         static_cast<double>(out.span));
  }
  return out;
}

std::string trace_csv_string(const Trace& trace) {
  std::string out = "tick_ns,event,agent,seq,length_bits,slot_index,v,delta\n";
  for (const TraceEvent& e : trace.events) {
    append_int(out, e.tick);
    out += ',';
    out += to_string(e.kind);
    out += ',';
    append_int(out, e.agent);
    out += ',';
    append_int(out, e.seq);
    out += ',';
    append_int(out, e.length_bits);
    out += ',';
    append_int(out, e.slot_index);
    out += ',';
    if (e.kind == TraceEventKind::AlphaUpdate) {
      append_double(out, e.alpha_old);
      out += ',';
      append_double(out, e.alpha_new);
    } else {
      append_double(out, e.v);
      out += ',';
      append_double(out, e.delta);
    }
    out += '\n';
  }
  return out;
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("trace: cannot open " + path.string());
  }
  f << trace_csv_string(trace);
  if (!f) {
    throw std::runtime_error("trace: write failed for " + path.string());
  }
}

void write_trace_json(const Trace& trace, const std::filesystem::path& path) {
  json events = json::array();
  for (const TraceEvent& e : trace.events) {
    json je = json::array();
    je.push_back(e.tick);
    je.push_back(to_string(e.kind));
    je.push_back(e.agent);
    je.push_back(e.seq);
    je.push_back(e.length_bits);
    je.push_back(e.slot_index);
    je.push_back(e.v);
    je.push_back(std::isnan(e.delta) ? json{} : json(e.delta));
    je.push_back(std::isnan(e.eps_next) ? json{} : json(e.eps_next));
    je.push_back(e.alpha_old);
    je.push_back(e.alpha_new);
    events.push_back(std::move(je));
  }
  json slots = json::array();
  for (const GeneralizedSlotRecord& s : trace.slots) {
    slots.push_back(json{{"index", s.index},
                         {"kind", to_string(s.kind)},
                         {"start_ns", s.start},
                         {"duration_ns", s.duration},
                         {"alpha", s.alpha},
                         {"contenders", s.contenders},
                         {"winner", s.winner},
                         {"crp_rounds", s.crp_rounds}});
  }
  json stats = json::array();
  for (const AgentTraceStats& st : trace.agent_stats) {
    stats.push_back(json{{"departures", st.departures},
                         {"service_bits", st.service_bits},
                         {"collisions_entered", st.collisions_entered}});
  }
  json intervals = json::array();
  for (const auto& per_agent : trace.backlog_intervals) {
    json ji = json::array();
    for (const auto& [from, to] : per_agent) {
      ji.push_back(json::array({from, to}));
    }
    intervals.push_back(std::move(ji));
  }
  json j{{"format", "dscfq-trace-v1"},
         {"scenario", scenario_to_json(trace.scenario)},
         {"events", std::move(events)},
         {"slots", std::move(slots)},
         {"agent_stats", std::move(stats)},
         {"backlog_intervals", std::move(intervals)},
         {"end_tick_ns", trace.end_tick},
         {"final_v", trace.final_v},
         {"final_alpha", trace.final_alpha}};
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("trace: cannot open " + path.string());
  }
  f << j.dump();
  f << '\n';
  if (!f) {
    throw std::runtime_error("trace: write failed for " + path.string());
  }
}

Trace read_trace_json(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("trace: cannot open " + path.string());
  }
  json j = json::parse(f);
  if (j.value("format", std::string{}) != "dscfq-trace-v1") {
    throw std::runtime_error("trace: unrecognized format in " + path.string());
  }
  Trace t;
  t.scenario = scenario_from_json(j.at("scenario"));
  for (const json& je : j.at("events")) {
    TraceEvent e;
    e.tick = je.at(0).get<Tick>();
    e.kind = event_kind_from_string(je.at(1).get<std::string>());
    e.agent = je.at(2).get<core::AgentId>();
    e.seq = je.at(3).get<std::int64_t>();
    e.length_bits = je.at(4).get<std::int64_t>();
    e.slot_index = je.at(5).get<std::int64_t>();
    e.v = je.at(6).get<double>();
    e.delta = je.at(7).is_null() ? std::numeric_limits<double>::quiet_NaN()
                                 : je.at(7).get<double>();
    e.eps_next = je.at(8).is_null() ? std::numeric_limits<double>::quiet_NaN()
                                    : je.at(8).get<double>();
    e.alpha_old = je.at(9).get<double>();
    e.alpha_new = je.at(10).get<double>();
    t.events.push_back(e);
  }
  for (const json& js : j.at("slots")) {
    GeneralizedSlotRecord s;
    s.index = js.at("index").get<std::int64_t>();
    s.kind = slot_kind_from_string(js.at("kind").get<std::string>());
    s.start = js.at("start_ns").get<Tick>();
    s.duration = js.at("duration_ns").get<Tick>();
    s.alpha = js.at("alpha").get<double>();
    s.contenders = js.at("contenders").get<std::vector<core::AgentId>>();
    s.winner = js.at("winner").get<core::AgentId>();
    s.crp_rounds = js.at("crp_rounds").get<std::int32_t>();
    t.slots.push_back(std::move(s));
  }
  for (const json& js : j.at("agent_stats")) {
    AgentTraceStats st;
    st.departures = js.at("departures").get<std::int64_t>();
    st.service_bits = js.at("service_bits").get<std::int64_t>();
    st.collisions_entered = js.at("collisions_entered").get<std::int64_t>();
    t.agent_stats.push_back(st);
  }
  for (const json& ji : j.at("backlog_intervals")) {
    std::vector<std::pair<Tick, Tick>> per_agent;
    for (const json& pair : ji) {
      per_agent.emplace_back(pair.at(0).get<Tick>(), pair.at(1).get<Tick>());
    }
    t.backlog_intervals.push_back(std::move(per_agent));
  }
  t.end_tick = j.at("end_tick_ns").get<Tick>();
  t.final_v = j.at("final_v").get<double>();
  t.final_alpha = j.at("final_alpha").get<double>();
  return t;
}

}  // namespace dscfq::engine
