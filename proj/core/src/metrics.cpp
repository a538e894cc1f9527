#include "dscfq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "dscfq/rng.hpp"

namespace dscfq::metrics {

using core::AgentId;
using engine::TraceEvent;
using engine::TraceEventKind;

std::optional<double> jain_fairness_index(const std::vector<double>& throughput,
                                          const std::vector<double>& weights) {
  if (throughput.empty() || throughput.size() != weights.size()) {
    throw std::invalid_argument("jain index: need matching non-empty vectors");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < throughput.size(); ++i) {
    if (!(weights[i] > 0.0)) {
      throw std::invalid_argument("jain index: weights must be positive");
    }
    double x = throughput[i] / weights[i];
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) return std::nullopt;
  return sum * sum / (static_cast<double>(throughput.size()) * sum_sq);
}

ThroughputReport per_agent_throughput(const Trace& trace, Tick from, Tick to) {
  if (from < 0 || to > trace.end_tick || from >= to) {
    throw std::invalid_argument("throughput: need 0 <= from < to <= end");
  }
  ThroughputReport rep;
  rep.from = from;
  rep.to = to;
  rep.bits.assign(trace.scenario.agents.size(), 0);
  std::int64_t total_bits = 0;
  for (const TraceEvent& e : trace.events) {
    if (e.kind != TraceEventKind::Departure) continue;
    if (e.tick <= from || e.tick > to) continue;
    rep.bits[static_cast<std::size_t>(e.agent)] += e.length_bits;
    total_bits += e.length_bits;
  }
  double span_s = static_cast<double>(to - from) * 1e-9;
  for (std::int64_t b : rep.bits) {
    rep.bits_per_second.push_back(static_cast<double>(b) / span_s);
  }
  rep.payload_fraction =
      static_cast<double>(total_bits) /
      (static_cast<double>(trace.scenario.timing.data_rate_bps) * span_s);
  return rep;
}

FairnessWindowSeries sliding_window_fairness(const Trace& trace,
                                             std::int64_t window) {
  if (window < 1) {
    throw std::invalid_argument("window fairness: window must be >= 1");
  }
  struct Dep {
    AgentId agent;
    std::int64_t bits;
  };
  std::vector<Dep> deps;
  for (const TraceEvent& e : trace.events) {
    if (e.kind == TraceEventKind::Departure) {
      deps.push_back(Dep{e.agent, e.length_bits});
    }
  }
  if (static_cast<std::int64_t>(deps.size()) < window) {
    throw std::invalid_argument(
        "window fairness: trace has fewer departures than the window");
  }
  const std::size_t n = trace.scenario.agents.size();
  std::vector<double> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    weights[k] = trace.scenario.agents[k].weight;
  }

  FairnessWindowSeries series;
  series.window = window;
  std::vector<double> bits(n, 0.0);
  const std::size_t w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < deps.size(); ++i) {
    bits[static_cast<std::size_t>(deps[i].agent)] +=
        static_cast<double>(deps[i].bits);
    if (i + 1 < w) continue;
    if (i + 1 > w) {
      const Dep& out = deps[i - w];
      bits[static_cast<std::size_t>(out.agent)] -=
          static_cast<double>(out.bits);
    }
    // the common wall-clock denominator cancels in the index, so the
    // window's raw service totals are enough
    series.index.push_back(*jain_fairness_index(bits, weights));
  }
  double total = 0.0;
  for (double x : series.index) total += x;
  series.mean = total / static_cast<double>(series.index.size());
  return series;
}

const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::DepartureDeviation: return "departure_deviation";
    case CheckKind::DeviationEnvelope: return "deviation_envelope";
    case CheckKind::PairwiseServiceGap: return "pairwise_service_gap";
    case CheckKind::CompensationIdentity: return "compensation_identity";
  }
  return "?";
}

namespace {

constexpr double kTol = 1e-9;

struct DepartureSample {
  Tick tick;
  std::vector<double> w;  // per-agent normalized service after this departure
};

// true when [t1, t2] sits inside one backlog interval of the agent
bool backlogged_throughout(const std::vector<std::pair<Tick, Tick>>& intervals,
                           Tick t1, Tick t2, Tick end_tick) {
  for (const auto& [start, end] : intervals) {
    Tick closed_end = end < 0 ? end_tick : end;
    if (start <= t1 && t2 <= closed_end) return true;
    if (start > t1) break;
  }
  return false;
}

}  // namespace

ViolationReport validate_trace(const Trace& trace) {
  const engine::Scenario& sc = trace.scenario;
  const std::size_t n = sc.agents.size();
  if (trace.backlog_intervals.size() != n || trace.agent_stats.size() != n) {
    throw std::invalid_argument("validate: trace shape does not match scenario");
  }
  const bool adaptive = engine::alpha_is_adaptive(sc.alpha_policy);
  const bool is_dscfq = sc.scheduler == sched::SchedulerKind::Dscfq;
  const bool asserted = is_dscfq && !adaptive;
  const bool deviation_checks = is_dscfq;  // baselines carry no guarantee

  ViolationReport report;
  auto sink = [&](Violation v) {
    (asserted ? report.violations : report.advisories).push_back(v);
  };

  core::NetworkVirtualClock clock(engine::initial_alpha(sc.alpha_policy));
  core::ServiceLedger ledger(sc.agents);
  std::vector<std::size_t> interval_idx(n, 0);
  std::vector<std::int64_t> absence_anchor(n, 0);
  std::vector<double> lmax_over_phi(n);
  for (std::size_t k = 0; k < n; ++k) {
    lmax_over_phi[k] =
        static_cast<double>(sc.agents[k].lengths.max_length_units()) /
        sc.agents[k].weight;
  }

  double min_alpha = engine::initial_alpha(sc.alpha_policy);
  for (const engine::GeneralizedSlotRecord& s : trace.slots) {
    min_alpha = std::min(min_alpha, s.alpha);
  }

  std::vector<DepartureSample> samples;
  std::vector<AgentId> sample_agents;

  // absent agents hold a deviation already covered by their last departure
  // check, and their replayed offset is only brought current on re-arrival
  auto envelope_check = [&](double slot_alpha, Tick tick) {
    if (!deviation_checks) return;
    double v_now = clock.value();
    for (std::size_t k = 0; k < n; ++k) {
      if (!ledger.backlogged(static_cast<AgentId>(k))) continue;
      double d = ledger.service_deviation(static_cast<AgentId>(k), v_now);
      double lower = -1.0 / slot_alpha;
      double upper = lmax_over_phi[k];
      if (d < lower - kTol || d > upper + kTol) {
        sink(Violation{CheckKind::DeviationEnvelope, tick,
                       static_cast<AgentId>(k), -1, d,
                       d > 0.0 ? upper : lower});
      }
    }
  };

  // replay cursor: slots advance the clock when the event stream moves past
  // them
  std::size_t advanced = 0;
  auto finalize_through = [&](std::size_t upto) {
    while (advanced < upto && advanced < trace.slots.size()) {
      const engine::GeneralizedSlotRecord& s = trace.slots[advanced];
      clock.advance(s.kind);
      if (s.kind == core::SlotKind::Idle && adaptive) {
        for (std::size_t k = 0; k < n; ++k) {
          if (!sc.agents[k].always_backlogged &&
              !ledger.backlogged(static_cast<AgentId>(k))) {
            ledger.sync_absent_agent(static_cast<AgentId>(k), 1.0 / s.alpha);
          }
        }
      }
      envelope_check(s.alpha, s.start + s.duration);
      ++advanced;
    }
  };

  for (const TraceEvent& e : trace.events) {
    switch (e.kind) {
      case TraceEventKind::SlotStart: {
        finalize_through(static_cast<std::size_t>(e.slot_index));
        for (std::size_t k = 0; k < n; ++k) {
          const auto& intervals = trace.backlog_intervals[k];
          std::size_t& idx = interval_idx[k];
          // <= instead of ==: saturated agents' intervals open at tick 0,
          // one sensing slot before the first recorded slot
          if (idx < intervals.size() && intervals[idx].first <= e.tick &&
              !ledger.backlogged(static_cast<AgentId>(k))) {
            if (!adaptive) {
              std::int64_t gained =
                  clock.idle_slot_count() - absence_anchor[k];
              if (gained > 0) {
                ledger.sync_absent_agent(static_cast<AgentId>(k),
                                         static_cast<double>(gained) /
                                             clock.alpha());
              }
            }
            ledger.mark_backlogged(static_cast<AgentId>(k), e.tick);
          }
        }
        break;
      }
      case TraceEventKind::AlphaUpdate: {
        finalize_through(static_cast<std::size_t>(e.slot_index) + 1);
        clock.set_alpha(e.alpha_new);
        break;
      }
      case TraceEventKind::Departure: {
        if (std::isnan(e.delta)) {
          throw std::invalid_argument(
              "validate: departure lacks a deviation snapshot");
        }
        double slot_alpha =
            trace.slots[static_cast<std::size_t>(e.slot_index)].alpha;
        if (deviation_checks) {
          double lower = -1.0 / slot_alpha;
          if (e.delta > kTol || e.delta <= lower - kTol) {
            sink(Violation{CheckKind::DepartureDeviation, e.tick, e.agent, -1,
                           e.delta, e.delta > 0.0 ? 0.0 : lower});
          }
          if (!std::isnan(e.eps_next) &&
              std::abs(e.eps_next - e.delta) > kTol) {
            sink(Violation{CheckKind::CompensationIdentity, e.tick, e.agent,
                           -1, e.eps_next - e.delta, kTol});
          }
        }
        ledger.record_service(e.agent,
                              e.length_bits / core::kBitsPerLengthUnit);
        const std::size_t k = static_cast<std::size_t>(e.agent);
        const auto& intervals = trace.backlog_intervals[k];
        std::size_t& idx = interval_idx[k];
        if (idx < intervals.size() && intervals[idx].second == e.tick) {
          ledger.mark_absent(e.agent, e.tick);
          absence_anchor[k] = clock.idle_slot_count();
          ++idx;
        }
        DepartureSample sample;
        sample.tick = e.tick;
        sample.w.resize(n);
        for (std::size_t a = 0; a < n; ++a) {
          sample.w[a] = ledger.normalized_service(static_cast<AgentId>(a));
        }
        samples.push_back(std::move(sample));
        sample_agents.push_back(e.agent);
        break;
      }
      default:
        break;
    }
  }
  finalize_through(trace.slots.size());

  // sampled pairwise service gaps over departure-delimited intervals
  const std::size_t d = samples.size();
  if (d >= 2) {
    auto check_pair = [&](std::size_t a, std::size_t b) {
      Tick t1 = samples[a].tick;
      Tick t2 = samples[b].tick;
      for (std::size_t k = 0; k < n; ++k) {
        if (!backlogged_throughout(trace.backlog_intervals[k], t1, t2,
                                   trace.end_tick)) {
          continue;
        }
        for (std::size_t j = k + 1; j < n; ++j) {
          if (!backlogged_throughout(trace.backlog_intervals[j], t1, t2,
                                     trace.end_tick)) {
            continue;
          }
          double gap = std::abs((samples[b].w[k] - samples[a].w[k]) -
                                (samples[b].w[j] - samples[a].w[j]));
          double bound = lmax_over_phi[k] + lmax_over_phi[j] + 2.0 / min_alpha;
          ++report.pairwise_samples;
          double ratio = gap / bound;
          report.max_pairwise_gap_ratio =
              std::max(report.max_pairwise_gap_ratio, ratio);
          if (gap > bound + kTol) {
            sink(Violation{CheckKind::PairwiseServiceGap, t2,
                           static_cast<AgentId>(k), static_cast<AgentId>(j),
                           gap, bound});
          }
        }
      }
    };
    for (std::size_t span = 1; span < d; span *= 2) {
      std::size_t positions = d - span;
      std::size_t stride = std::max<std::size_t>(1, positions / 4096);
      for (std::size_t a = 0; a < positions; a += stride) {
        check_pair(a, a + span);
      }
    }
    core::SplitMix64 rng =
        core::substream(sc.seed, 0xfa1f, core::StreamKind::Aux);
    for (int i = 0; i < 1000; ++i) {
      std::size_t a = static_cast<std::size_t>(rng.uniform_below(d));
      std::size_t b = static_cast<std::size_t>(rng.uniform_below(d));
      if (a == b) continue;
      check_pair(std::min(a, b), std::max(a, b));
    }
  }

  return report;
}

std::string report_json(const ViolationReport& report) {
  using nlohmann::json;
  auto entry = [](const Violation& v) {
    return json{{"check", to_string(v.check)}, {"tick_ns", v.tick},
                {"agent", v.agent},            {"other", v.other},
                {"observed", v.observed},      {"bound", v.bound}};
  };
  json violations = json::array();
  for (const Violation& v : report.violations) violations.push_back(entry(v));
  json advisories = json::array();
  for (const Violation& v : report.advisories) advisories.push_back(entry(v));
  json j{{"violations", std::move(violations)},
         {"advisories", std::move(advisories)},
         {"max_pairwise_gap_ratio", report.max_pairwise_gap_ratio},
         {"pairwise_samples", report.pairwise_samples},
         {"clean", report.clean()}};
  return j.dump(2);
}

}  // namespace dscfq::metrics
