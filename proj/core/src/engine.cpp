#include "dscfq/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dscfq/analysis.hpp"

namespace dscfq::engine {

namespace {

constexpr std::int64_t kMaxCrpRounds = 1'000'000;

Tick pulse_window(const std::vector<std::int32_t>& pulses, Tick sigma) {
  return *std::max_element(pulses.begin(), pulses.end()) * sigma;
}

}  // namespace

CollisionPhaseResult collision_phase(
    std::vector<CollisionContender>& contenders, const TimingParams& timing,
    std::int32_t branch_factor, Tick start, std::int64_t slot_index,
    double v_snapshot, std::vector<TraceEvent>* events,
    const std::function<void(core::AgentId, Tick)>& on_departure) {
  if (contenders.size() < 2) {
    throw std::invalid_argument("collision phase: need >= 2 contenders");
  }
  const sched::SchedulerKind kind = contenders.front().state->kind;
  for (const CollisionContender& c : contenders) {
    if (c.state == nullptr || c.state->kind != kind) {
      throw std::invalid_argument(
          "collision phase: contenders must share one scheduler kind");
    }
  }

  CollisionPhaseResult result;
  result.slot.index = slot_index;
  result.slot.kind = core::SlotKind::Collision;
  result.slot.start = start;
  for (const CollisionContender& c : contenders) {
    result.slot.contenders.push_back(c.agent);
  }

  auto emit = [&](TraceEvent e) {
    if (events != nullptr) events->push_back(e);
  };
  auto tx_event = [&](Tick tick, TraceEventKind k, const CollisionContender& c) {
    TraceEvent e;
    e.tick = tick;
    e.kind = k;
    e.agent = c.agent;
    e.seq = c.seq;
    e.length_bits = c.length_units * core::kBitsPerLengthUnit;
    e.slot_index = slot_index;
    e.v = v_snapshot;
    emit(e);
  };

  // the simultaneous attempt that starts the slot
  for (const CollisionContender& c : contenders) {
    tx_event(start, TraceEventKind::TxStart, c);
  }
  Tick t = start + collided_attempt_duration(timing);
  {
    TraceEvent e;
    e.tick = t;
    e.kind = TraceEventKind::TxEndCollision;
    e.slot_index = slot_index;
    e.v = v_snapshot;
    emit(e);
  }
  for (CollisionContender& c : contenders) {
    sched::on_collision(*c.state);
  }

  if (kind == sched::SchedulerKind::TypeI) {
    // no resolution: contenders defer with widened windows and the slot ends
    t += timing.sigma;
    result.slot.duration = t - start;
    return result;
  }

  // splitting resolution: every unresolved contender pulses each round; a
  // unique longest pulse transmits, a tied longest re-collides one interval up
  std::vector<std::size_t> active(contenders.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  std::int32_t rounds = 0;
  std::vector<std::int32_t> pulses;
  while (!active.empty()) {
    if (++rounds > kMaxCrpRounds) {
      throw std::runtime_error(
          "collision phase: splitting resolution did not terminate "
          "(branch factor too small?)");
    }
    t += timing.hifs();
    pulses.clear();
    for (std::size_t idx : active) {
      CollisionContender& c = contenders[idx];
      pulses.push_back(sched::draw_split_pulse(c.state->counter.q,
                                               branch_factor, *c.pulse_rng));
      TraceEvent e;
      e.tick = t;
      e.kind = TraceEventKind::CrpPulse;
      e.agent = c.agent;
      e.seq = c.seq;
      e.length_bits = pulses.back();
      e.slot_index = slot_index;
      e.v = v_snapshot;
      emit(e);
    }
    t += pulse_window(pulses, timing.sigma);

    if (active.size() == 1) {
      // sole survivor: nothing outlasts its pulse, it transmits unopposed
      CollisionContender& c = contenders[active.front()];
      tx_event(t, TraceEventKind::TxStart, c);
      Tick done =
          t + frame_exchange_duration(c.length_units * core::kBitsPerLengthUnit,
                                      timing);
      tx_event(done, TraceEventKind::TxEndSuccess, c);
      if (on_departure) on_departure(c.agent, done);
      sched::on_success(*c.state);
      result.departures.push_back(c.agent);
      t = done;
      active.clear();
      break;
    }

    sched::CrpRoundOutcome outcome = sched::crp_round(pulses);
    if (outcome.has_winner) {
      CollisionContender& c = contenders[active[outcome.winner]];
      tx_event(t, TraceEventKind::TxStart, c);
      Tick done =
          t + frame_exchange_duration(c.length_units * core::kBitsPerLengthUnit,
                                      timing);
      tx_event(done, TraceEventKind::TxEndSuccess, c);
      if (on_departure) on_departure(c.agent, done);
      sched::on_success(*c.state);
      result.departures.push_back(c.agent);
      t = done;
      active.erase(active.begin() +
                   static_cast<std::ptrdiff_t>(outcome.winner));
    } else {
      for (std::size_t tied : outcome.tied) {
        CollisionContender& c = contenders[active[tied]];
        tx_event(t, TraceEventKind::TxStart, c);
        sched::on_collision(*c.state);
      }
      t += collided_attempt_duration(timing);
      TraceEvent e;
      e.tick = t;
      e.kind = TraceEventKind::TxEndCollision;
      e.slot_index = slot_index;
      e.v = v_snapshot;
      emit(e);
    }
  }

  t += timing.sigma;
  result.slot.duration = t - start;
  result.slot.crp_rounds = rounds;
  return result;
}

namespace {

struct AgentRuntime {
  core::AgentId id = 0;
  const core::AgentSpec* spec = nullptr;
  sched::AgentSchedState sched;
  core::SplitMix64 length_rng{0};
  core::SplitMix64 arrival_rng{0};
  core::SplitMix64 pulse_rng{0};
  core::SplitMix64 beb_rng{0};

  bool backlogged = false;
  std::int64_t queued = 0;  // arrival mode: packets waiting, head included
  Tick next_arrival = 0;
  std::int64_t absence_anchor_idles = 0;

  bool has_head = false;
  std::int64_t head_len_units = 0;
  std::int64_t head_seq = 0;
  std::int64_t head_tag = 0;        // assigned backoff, in idle slots
  double head_tag_alpha = 0.0;      // scaling factor the tag was computed with
  std::int64_t tag_remaining = 0;
  bool tag_assigned = false;
  bool retransmit = false;          // Type I: head already collided
  std::int64_t next_seq = 0;
};

}  // namespace

Trace run_simulation(const Scenario& scenario) {
  validate_scenario(scenario);
  const TimingParams& tm = scenario.timing;
  const std::size_t n = scenario.agents.size();

  double alpha = initial_alpha(scenario.alpha_policy);
  const bool adaptive = alpha_is_adaptive(scenario.alpha_policy);
  analysis::AdaptiveAlphaController controller;
  if (adaptive) {
    const auto& ad = std::get<AdaptiveAlpha>(scenario.alpha_policy);
    controller.alpha = ad.alpha0;
    controller.alpha_min = ad.alpha_min;
    controller.alpha_max = ad.alpha_max;
    controller.gamma = ad.gamma > 0.0 ? ad.gamma : 1e-4 * ad.alpha0;
    if (ad.beta > 0.0) {
      controller.beta = ad.beta;
    } else {
      double mean_bits = 0.0;
      for (const core::AgentSpec& a : scenario.agents) {
        mean_bits += a.lengths.mean_units() *
                     static_cast<double>(core::kBitsPerLengthUnit);
      }
      mean_bits /= static_cast<double>(n);
      analysis::ThroughputModel model =
          analysis::model_from_timing(tm, mean_bits, scenario.branch_factor);
      double g_star = analysis::optimal_attempt_rate(model);
      controller.beta = analysis::derive_beta(controller.gamma, g_star);
    }
  }

  core::NetworkVirtualClock clock(alpha);
  core::ServiceLedger ledger(scenario.agents);

  Trace trace;
  trace.scenario = scenario;
  trace.agent_stats.resize(n);

  std::vector<AgentRuntime> agents(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentRuntime& rt = agents[i];
    rt.id = static_cast<core::AgentId>(i);
    rt.spec = &scenario.agents[i];
    rt.sched.kind = scenario.scheduler;
    rt.sched.beb.cw = scenario.cw_min;
    rt.sched.beb.cw_min = scenario.cw_min;
    rt.sched.beb.cw_max = scenario.cw_max;
    rt.length_rng = core::substream(scenario.seed, i, core::StreamKind::PacketLength);
    rt.arrival_rng = core::substream(scenario.seed, i, core::StreamKind::Arrival);
    rt.pulse_rng = core::substream(scenario.seed, i, core::StreamKind::SplitPulse);
    rt.beb_rng = core::substream(scenario.seed, i, core::StreamKind::Beb);
    if (rt.spec->always_backlogged) {
      rt.backlogged = true;
      ledger.mark_backlogged(rt.id, 0);
    } else {
      rt.next_arrival = static_cast<Tick>(
          rt.arrival_rng.exponential(1e9 / rt.spec->arrival_rate_pps));
    }
  }

  auto draw_head = [&](AgentRuntime& rt) {
    rt.head_len_units = rt.spec->lengths.draw(rt.length_rng);
    rt.head_seq = ++rt.next_seq;
    rt.has_head = true;
    rt.tag_assigned = false;
  };

  auto assign_tag = [&](AgentRuntime& rt) {
    sched::BackoffTag tag;
    switch (rt.sched.kind) {
      case sched::SchedulerKind::Dscfq: {
        double eps = adaptive ? rt.sched.comp.epsilon_running
                              : rt.sched.comp.epsilon(alpha, rt.spec->weight);
        tag = sched::compute_backoff_dscfq(rt.head_len_units, rt.spec->weight,
                                           alpha, eps);
        break;
      }
      case sched::SchedulerKind::TypeII:
        tag = sched::compute_backoff_type_proportional(rt.head_len_units,
                                                       rt.spec->weight, alpha);
        break;
      case sched::SchedulerKind::TypeI:
        tag = rt.retransmit
                  ? sched::beb_draw(rt.sched.beb.cw, rt.beb_rng)
                  : sched::compute_backoff_type_proportional(
                        rt.head_len_units, rt.spec->weight, alpha);
        break;
    }
    rt.head_tag = tag.slots;
    rt.head_tag_alpha = alpha;
    rt.tag_remaining = tag.slots;
    rt.tag_assigned = true;
  };

  // Departure bookkeeping shared by the success path and the splitting
  // resolution: service credit, deviation snapshot, compensation update,
  // queue pop. New head packets are tagged at the end of the slot.
  std::int64_t slot_index = 0;
  auto deliver = [&](core::AgentId id, Tick tick) {
    AgentRuntime& rt = agents[static_cast<std::size_t>(id)];
    ledger.record_service(id, rt.head_len_units);
    double delta = ledger.service_deviation(id, clock.value());
    double eps_next = std::numeric_limits<double>::quiet_NaN();
    if (rt.sched.kind == sched::SchedulerKind::Dscfq) {
      sched::update_compensation(rt.sched.comp, sched::BackoffTag{rt.head_tag},
                                 rt.head_tag_alpha, rt.head_len_units,
                                 rt.spec->weight);
      eps_next = adaptive ? rt.sched.comp.epsilon_running
                          : rt.sched.comp.epsilon(alpha, rt.spec->weight);
    }
    TraceEvent e;
    e.tick = tick;
    e.kind = TraceEventKind::Departure;
    e.agent = id;
    e.seq = rt.head_seq;
    e.length_bits = rt.head_len_units * core::kBitsPerLengthUnit;
    e.slot_index = slot_index;
    e.v = clock.value();
    e.delta = delta;
    e.eps_next = eps_next;
    trace.events.push_back(e);

    AgentTraceStats& st = trace.agent_stats[static_cast<std::size_t>(id)];
    ++st.departures;
    st.service_bits += e.length_bits;

    rt.has_head = false;
    rt.tag_assigned = false;
    rt.retransmit = false;
    if (!rt.spec->always_backlogged) {
      --rt.queued;
      if (rt.queued == 0) {
        rt.backlogged = false;
        ledger.mark_absent(id, tick);
        rt.absence_anchor_idles = clock.idle_slot_count();
      }
    }
  };

  if (scenario.duration == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      trace.backlog_intervals.push_back(ledger.backlog_intervals(agents[i].id));
    }
    trace.final_alpha = alpha;
    return trace;
  }

  // initial heads for saturated agents; the first slot begins after one
  // sensing slot
  for (AgentRuntime& rt : agents) {
    if (rt.backlogged) {
      draw_head(rt);
      assign_tag(rt);
    }
  }

  Tick now = tm.sigma;
  std::vector<core::AgentId> ready;
  std::vector<CollisionContender> contenders;
  while (now < scenario.duration) {
    // arrivals become visible at slot boundaries
    for (AgentRuntime& rt : agents) {
      if (rt.spec->always_backlogged) continue;
      while (rt.next_arrival <= now) {
        ++rt.queued;
        rt.next_arrival += static_cast<Tick>(
            rt.arrival_rng.exponential(1e9 / rt.spec->arrival_rate_pps));
      }
      if (!rt.backlogged && rt.queued > 0) {
        if (!adaptive) {
          // adaptive runs sync absences one idle slot at a time instead
          std::int64_t gained = clock.idle_slot_count() - rt.absence_anchor_idles;
          if (gained > 0) {
            ledger.sync_absent_agent(rt.id, static_cast<double>(gained) / alpha);
          }
        }
        rt.backlogged = true;
        ledger.mark_backlogged(rt.id, now);
        draw_head(rt);
        assign_tag(rt);
      }
    }

    ready.clear();
    for (AgentRuntime& rt : agents) {
      if (rt.backlogged && rt.has_head && rt.tag_assigned &&
          rt.tag_remaining == 0) {
        ready.push_back(rt.id);
      }
    }

    {
      TraceEvent e;
      e.tick = now;
      e.kind = TraceEventKind::SlotStart;
      e.slot_index = slot_index;
      e.v = clock.value();
      trace.events.push_back(e);
    }

    core::SlotKind kind;
    GeneralizedSlotRecord slot;
    slot.index = slot_index;
    slot.start = now;
    slot.alpha = alpha;

    if (ready.empty()) {
      kind = core::SlotKind::Idle;
      slot.kind = kind;
      slot.duration = tm.sigma;
      now += tm.sigma;
      for (AgentRuntime& rt : agents) {
        if (rt.backlogged && rt.tag_assigned && rt.tag_remaining > 0) {
          --rt.tag_remaining;
        }
      }
    } else if (ready.size() == 1) {
      kind = core::SlotKind::Success;
      AgentRuntime& rt = agents[static_cast<std::size_t>(ready.front())];
      TraceEvent e;
      e.tick = now;
      e.kind = TraceEventKind::TxStart;
      e.agent = rt.id;
      e.seq = rt.head_seq;
      e.length_bits = rt.head_len_units * core::kBitsPerLengthUnit;
      e.slot_index = slot_index;
      e.v = clock.value();
      trace.events.push_back(e);

      Tick done = now + frame_exchange_duration(e.length_bits, tm);
      e.tick = done;
      e.kind = TraceEventKind::TxEndSuccess;
      trace.events.push_back(e);

      deliver(rt.id, done);
      sched::on_success(rt.sched);

      slot.kind = kind;
      slot.duration = done + tm.sigma - now;
      slot.winner = rt.id;
      slot.contenders = {rt.id};
      now = done + tm.sigma;
    } else {
      kind = core::SlotKind::Collision;
      contenders.clear();
      for (core::AgentId id : ready) {
        AgentRuntime& rt = agents[static_cast<std::size_t>(id)];
        contenders.push_back(CollisionContender{id, rt.head_len_units,
                                                rt.head_seq, &rt.sched,
                                                &rt.pulse_rng});
        ++trace.agent_stats[static_cast<std::size_t>(id)].collisions_entered;
      }
      CollisionPhaseResult phase =
          collision_phase(contenders, tm, scenario.branch_factor, now,
                          slot_index, clock.value(), &trace.events, deliver);
      slot = phase.slot;
      slot.alpha = alpha;
      now = slot.start + slot.duration;
      if (scenario.scheduler == sched::SchedulerKind::TypeI) {
        for (core::AgentId id : ready) {
          agents[static_cast<std::size_t>(id)].retransmit = true;
          agents[static_cast<std::size_t>(id)].tag_assigned = false;
        }
      }
    }

    trace.slots.push_back(std::move(slot));
    clock.advance(kind);
    if (adaptive && kind == core::SlotKind::Idle) {
      for (AgentRuntime& rt : agents) {
        if (!rt.spec->always_backlogged && !rt.backlogged) {
          ledger.sync_absent_agent(rt.id, 1.0 / alpha);
        }
      }
    }

    if (adaptive) {
      double before = controller.alpha;
      controller.update(kind);
      if (controller.alpha != before) {
        TraceEvent e;
        e.tick = now;
        e.kind = TraceEventKind::AlphaUpdate;
        e.slot_index = slot_index;
        e.v = clock.value();
        e.alpha_old = before;
        e.alpha_new = controller.alpha;
        trace.events.push_back(e);
        alpha = controller.alpha;
        clock.set_alpha(alpha);
      }
    }

    // new or re-tagged head packets take effect from the next slot
    for (AgentRuntime& rt : agents) {
      if (!rt.backlogged) continue;
      if (!rt.has_head) draw_head(rt);
      if (!rt.tag_assigned) assign_tag(rt);
    }
    ++slot_index;
  }

  for (std::size_t i = 0; i < n; ++i) {
    trace.backlog_intervals.push_back(ledger.backlog_intervals(agents[i].id));
  }
  trace.end_tick = now;
  trace.final_v = clock.value();
  trace.final_alpha = alpha;
  return trace;
}

}  // namespace dscfq::engine
