#include "experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "dscfq/engine.hpp"
#include "dscfq/metrics.hpp"
#include "dscfq/timing.hpp"
#include "dscfq/trace.hpp"

namespace dscfq::tools {

using nlohmann::json;

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Run: return "run";
    case ExperimentKind::SweepAlpha: return "sweep_alpha";
    case ExperimentKind::Adaptive: return "adaptive";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::Analyze: return "analyze";
    case ExperimentKind::Validate: return "validate";
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& s) {
  if (s == "run") return ExperimentKind::Run;
  if (s == "sweep_alpha") return ExperimentKind::SweepAlpha;
  if (s == "adaptive") return ExperimentKind::Adaptive;
  if (s == "compare") return ExperimentKind::Compare;
  if (s == "analyze") return ExperimentKind::Analyze;
  if (s == "validate") return ExperimentKind::Validate;
  throw ConfigError("config: unknown experiment \"" + s + "\"");
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)digest);
  return buf;
}

std::vector<double> default_sweep_grid() {
  return {0.005, 0.0075, 0.011, 0.017, 0.026, 0.039, 0.058, 0.08, 0.13, 0.2};
}

std::vector<double> default_compare_grid() { return {0.001, 0.005, 0.02}; }

namespace {

// shortest round-trip decimal form, deterministic across runs
void append_num(std::string& out, double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

void append_num(std::string& out, std::int64_t x) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

analysis::NbarFormula nbar_from_string(const std::string& s) {
  if (s == "exact") return analysis::NbarFormula::Exact;
  if (s == "paper") return analysis::NbarFormula::Paper;
  throw ConfigError("config: nbar_formula must be \"exact\" or \"paper\"");
}

const char* to_string(analysis::NbarFormula f) {
  return f == analysis::NbarFormula::Exact ? "exact" : "paper";
}

/// Population mean payload in bits, the packet-size parameter of the
/// analytic model.
double mean_payload_bits(const engine::Scenario& sc) {
  double sum = 0.0;
  for (const auto& a : sc.agents) {
    sum += a.lengths.mean_units() * static_cast<double>(core::kBitsPerLengthUnit);
  }
  return sum / static_cast<double>(sc.agents.size());
}

/// Analytic throughput model with the collision cost calibrated from a
/// trace: the scaled cost charges the fixed exchange plus payload airtime
/// per delivered packet, and the calibration measures the run's mean
/// resolution overhead per collision slot (slot duration minus the
/// delivered packets' exchange time). Falls back to the uncalibrated
/// timing-derived cost when the trace holds no collisions.
analysis::ThroughputModel calibrated_model(const engine::Trace& trace,
                                           const engine::Scenario& sc,
                                           analysis::NbarFormula nbar) {
  const double bits = mean_payload_bits(sc);
  auto model = analysis::model_from_timing(sc.timing, bits, sc.branch_factor);
  model.nbar = nbar;

  const double fixed_ns =
      static_cast<double>(engine::frame_exchange_duration(0, sc.timing));
  std::map<std::int64_t, std::int64_t> bits_in_slot, packets_in_slot;
  for (const auto& e : trace.events) {
    if (e.kind == engine::TraceEventKind::Departure) {
      bits_in_slot[e.slot_index] += e.length_bits;
      packets_in_slot[e.slot_index] += 1;
    }
  }
  double overhead_ns = 0.0;
  std::int64_t collisions = 0;
  for (const auto& slot : trace.slots) {
    if (slot.kind != core::SlotKind::Collision) continue;
    ++collisions;
    overhead_ns += static_cast<double>(slot.duration) -
                   static_cast<double>(packets_in_slot[slot.index]) * fixed_ns -
                   static_cast<double>(bits_in_slot[slot.index]) *
                       (1e9 / sc.timing.data_rate_bps);
  }
  if (collisions > 0) {
    double per_winner_s = fixed_ns * 1e-9 + bits / sc.timing.data_rate_bps;
    model.t_coll = analysis::CollisionCost::crp_scaled(
        overhead_ns / static_cast<double>(collisions) * 1e-9, per_winner_s, 0.0);
  }
  return model;
}

struct Writer {
  std::filesystem::path dir;
  std::vector<ManifestEntry> files;

  ManifestEntry& add(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.close();
    files.push_back({name, fnv1a(content), content.size()});
    return files.back();
  }

  // digests a file some other writer already produced under dir
  ManifestEntry& track(const std::string& name) {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    files.push_back({name, fnv1a(content), content.size()});
    return files.back();
  }
};

engine::Trace run_seeded(engine::Scenario sc, std::uint64_t seed) {
  sc.seed = seed;
  return engine::run_simulation(sc);
}

std::vector<double> scenario_weights(const engine::Scenario& sc) {
  std::vector<double> w;
  w.reserve(sc.agents.size());
  for (const auto& a : sc.agents) w.push_back(a.weight);
  return w;
}

json validation_json(const metrics::ViolationReport& rep) {
  return json{{"violations", rep.violations.size()},
              {"advisories", rep.advisories.size()},
              {"max_pairwise_gap_ratio", rep.max_pairwise_gap_ratio},
              {"pairwise_samples", rep.pairwise_samples}};
}

// ---------------------------------------------------------------------------
// run: one full trace per seed, with summary and validation report.
// ---------------------------------------------------------------------------
void experiment_run(const ExperimentConfig& cfg, Writer& w,
                    std::int64_t& violations) {
  for (std::uint64_t seed : cfg.seeds) {
    auto trace = run_seeded(cfg.scenario, seed);
    auto summary = engine::summarize(trace);
    auto rep = metrics::validate_trace(trace);
    violations += static_cast<std::int64_t>(rep.violations.size());

    const std::string tag = "seed" + std::to_string(seed);
    w.add("trace_" + tag + ".csv", engine::trace_csv_string(trace));

    // full-fidelity trace for later `validate` / offline analysis
    std::filesystem::create_directories(w.dir);
    engine::write_trace_json(trace, w.dir / ("trace_" + tag + ".json"));
    w.track("trace_" + tag + ".json");

    json js{{"seed", seed},
            {"departures", summary.departures},
            {"idle_slots", summary.idle_slots},
            {"success_slots", summary.success_slots},
            {"collision_slots", summary.collision_slots},
            {"mean_crp_rounds", summary.mean_crp_rounds},
            {"mean_collision_slot_ns", summary.mean_collision_slot_ns},
            {"payload_fraction", summary.payload_fraction},
            {"throughput_bps", summary.throughput_bps},
            {"service_bits", summary.service_bits},
            {"final_alpha", trace.final_alpha},
            {"end_tick_ns", trace.end_tick},
            {"validation", validation_json(rep)}};
    w.add("summary_" + tag + ".json", js.dump(2) + "\n");
  }
}

// ---------------------------------------------------------------------------
// sweep_alpha: empirical vs analytic saturation throughput over the grid,
// with per-point weighted fairness. The model is calibrated once per grid
// point from the first seed's trace.
// ---------------------------------------------------------------------------
void experiment_sweep(const ExperimentConfig& cfg, Writer& w,
                      std::int64_t& violations) {
  const auto grid =
      cfg.alpha_grid.empty() ? default_sweep_grid() : cfg.alpha_grid;
  const auto weights = scenario_weights(cfg.scenario);

  std::string csv =
      "alpha,attempt_rate,s_emp_mean,s_model,jain_mean,violations\n";
  json detail = json::array();

  for (double alpha : grid) {
    auto sc = cfg.scenario;
    sc.alpha_policy = engine::FixedAlpha{alpha};
    double g = analysis::attempt_rate_from_alpha(sc, alpha);

    json seeds_js = json::array();
    double s_sum = 0.0, jain_sum = 0.0, s_model = 0.0;
    std::int64_t point_violations = 0;
    bool first_seed = true;
    for (std::uint64_t seed : cfg.seeds) {
      auto trace = run_seeded(sc, seed);
      auto summary = engine::summarize(trace);
      auto tp = metrics::per_agent_throughput(trace, 0, trace.end_tick);
      double jain =
          metrics::jain_fairness_index(tp.bits_per_second, weights).value_or(0.0);
      auto rep = metrics::validate_trace(trace);
      point_violations += static_cast<std::int64_t>(rep.violations.size());

      s_sum += summary.payload_fraction;
      jain_sum += jain;
      seeds_js.push_back(json{{"seed", seed},
                              {"s_emp", summary.payload_fraction},
                              {"jain", jain},
                              {"departures", summary.departures}});
      if (first_seed) {
        auto model = calibrated_model(trace, sc, cfg.nbar);
        s_model = analysis::saturation_throughput(g, model);
        detail.push_back(json{{"alpha", alpha},
                              {"attempt_rate", g},
                              {"collision_cost_base_s", model.t_coll.base_s},
                              {"collision_cost_per_winner_s",
                               model.t_coll.per_winner_s}});
        first_seed = false;
      }
    }
    const double n = static_cast<double>(cfg.seeds.size());
    detail.back()["seeds"] = std::move(seeds_js);
    detail.back()["s_emp_mean"] = s_sum / n;
    detail.back()["s_model"] = s_model;
    violations += point_violations;

    append_num(csv, alpha);
    csv += ',';
    append_num(csv, g);
    csv += ',';
    append_num(csv, s_sum / n);
    csv += ',';
    append_num(csv, s_model);
    csv += ',';
    append_num(csv, jain_sum / n);
    csv += ',';
    append_num(csv, point_violations);
    csv += '\n';
  }

  w.add("sweep.csv", csv);
  w.add("sweep.json",
        json{{"nbar_formula", to_string(cfg.nbar)}, {"points", detail}}.dump(2) +
            "\n");
}

// ---------------------------------------------------------------------------
// adaptive: controller trajectory per seed, bucketed into 100 intervals:
// mean alpha, weighted fairness, payload fraction, and per-agent normalized
// throughput per bucket.
// ---------------------------------------------------------------------------
void experiment_adaptive(const ExperimentConfig& cfg, Writer& w,
                         std::int64_t& violations) {
  auto sc = cfg.scenario;
  if (!engine::alpha_is_adaptive(sc.alpha_policy))
    sc.alpha_policy = engine::AdaptiveAlpha{};
  const auto weights = scenario_weights(sc);

  for (std::uint64_t seed : cfg.seeds) {
    auto trace = run_seeded(sc, seed);
    auto summary = engine::summarize(trace);
    auto rep = metrics::validate_trace(trace);
    violations += static_cast<std::int64_t>(rep.violations.size());

    const std::string tag = "seed" + std::to_string(seed);
    const int buckets = 100;
    const engine::Tick span = trace.end_tick;

    std::string series = "t_ns,alpha,fairness,payload_fraction\n";
    std::string agents = "t_ns,agent,weight,normalized_bps\n";
    std::size_t slot_i = 0;
    for (int b = 0; b < buckets; ++b) {
      engine::Tick lo = span * b / buckets;
      engine::Tick hi = span * (b + 1) / buckets;
      double alpha_sum = 0.0;
      std::int64_t alpha_n = 0;
      while (slot_i < trace.slots.size() && trace.slots[slot_i].start < hi) {
        alpha_sum += trace.slots[slot_i].alpha;
        ++alpha_n;
        ++slot_i;
      }
      auto tp = metrics::per_agent_throughput(trace, lo, hi);
      double jain =
          metrics::jain_fairness_index(tp.bits_per_second, weights).value_or(0.0);

      append_num(series, hi);
      series += ',';
      append_num(series, alpha_n > 0 ? alpha_sum / alpha_n : 0.0);
      series += ',';
      append_num(series, jain);
      series += ',';
      append_num(series, tp.payload_fraction);
      series += '\n';

      for (std::size_t a = 0; a < weights.size(); ++a) {
        append_num(agents, hi);
        agents += ',';
        agents += sc.agents[a].id;
        agents += ',';
        append_num(agents, weights[a]);
        agents += ',';
        append_num(agents, tp.bits_per_second[a] / weights[a]);
        agents += '\n';
      }
    }
    w.add("adaptive_series_" + tag + ".csv", series);
    w.add("adaptive_agents_" + tag + ".csv", agents);

    double q4_sum = 0.0;
    std::int64_t q4_n = 0;
    for (const auto& slot : trace.slots) {
      if (slot.start >= span * 3 / 4) {
        q4_sum += slot.alpha;
        ++q4_n;
      }
    }
    auto tp = metrics::per_agent_throughput(trace, 0, span);
    json js{{"seed", seed},
            {"departures", summary.departures},
            {"final_alpha", trace.final_alpha},
            {"final_quarter_mean_alpha", q4_n > 0 ? q4_sum / q4_n : 0.0},
            {"whole_run_fairness",
             metrics::jain_fairness_index(tp.bits_per_second, weights)
                 .value_or(0.0)},
            {"payload_fraction", summary.payload_fraction},
            {"validation", validation_json(rep)}};
    w.add("adaptive_summary_" + tag + ".json", js.dump(2) + "\n");
  }
}

// ---------------------------------------------------------------------------
// compare: the three scheduler kinds on common random numbers; windowed
// fairness means per (alpha, window, scheduler).
// ---------------------------------------------------------------------------
void experiment_compare(const ExperimentConfig& cfg, Writer& w,
                        std::int64_t& violations) {
  const auto grid =
      cfg.alpha_grid.empty() ? default_compare_grid() : cfg.alpha_grid;
  const sched::SchedulerKind kinds[3] = {sched::SchedulerKind::Dscfq,
                                         sched::SchedulerKind::TypeII,
                                         sched::SchedulerKind::TypeI};

  std::string csv = "alpha,window,scheduler,fairness_mean,fairness_min,fairness_max\n";
  json detail = json::array();

  for (double alpha : grid) {
    // mean per kind and window over seeds
    std::vector<std::vector<std::vector<double>>> swm(
        3, std::vector<std::vector<double>>(cfg.windows.size()));
    for (int ki = 0; ki < 3; ++ki) {
      auto sc = cfg.scenario;
      sc.scheduler = kinds[ki];
      sc.alpha_policy = engine::FixedAlpha{alpha};
      for (std::uint64_t seed : cfg.seeds) {
        auto trace = run_seeded(sc, seed);
        auto rep = metrics::validate_trace(trace);
        violations += static_cast<std::int64_t>(rep.violations.size());
        for (std::size_t wi = 0; wi < cfg.windows.size(); ++wi) {
          swm[ki][wi].push_back(
              metrics::sliding_window_fairness(trace, cfg.windows[wi]).mean);
        }
      }
    }
    for (std::size_t wi = 0; wi < cfg.windows.size(); ++wi) {
      for (int ki = 0; ki < 3; ++ki) {
        const auto& xs = swm[ki][wi];
        double sum = 0.0, mn = xs.front(), mx = xs.front();
        for (double x : xs) {
          sum += x;
          mn = std::min(mn, x);
          mx = std::max(mx, x);
        }
        double mean = sum / static_cast<double>(xs.size());
        append_num(csv, alpha);
        csv += ',';
        append_num(csv, cfg.windows[wi]);
        csv += ',';
        csv += engine::to_string(kinds[ki]);
        csv += ',';
        append_num(csv, mean);
        csv += ',';
        append_num(csv, mn);
        csv += ',';
        append_num(csv, mx);
        csv += '\n';
        detail.push_back(json{{"alpha", alpha},
                              {"window", cfg.windows[wi]},
                              {"scheduler", engine::to_string(kinds[ki])},
                              {"fairness_mean", mean},
                              {"per_seed", xs}});
      }
    }
  }
  w.add("compare.csv", csv);
  w.add("compare.json", json{{"points", detail}}.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// analyze: closed-form curves only, no simulation.
// ---------------------------------------------------------------------------
void experiment_analyze(const ExperimentConfig& cfg, Writer& w) {
  const auto& sc = cfg.scenario;
  auto model =
      analysis::model_from_timing(sc.timing, mean_payload_bits(sc), sc.branch_factor);
  model.nbar = cfg.nbar;
  double g_star = analysis::optimal_attempt_rate(model);
  double factor = analysis::attempt_rate_factor(sc);
  double alpha_star = factor / g_star;

  double gamma = 1e-4 * 0.2, beta = 0.0;
  if (const auto* ad = std::get_if<engine::AdaptiveAlpha>(&sc.alpha_policy)) {
    gamma = ad->gamma > 0.0 ? ad->gamma : 1e-4 * ad->alpha0;
    beta = ad->beta;
  }
  if (beta <= 0.0) beta = analysis::derive_beta(gamma, g_star);

  std::string slots = "attempt_rate,p_idle,p_success,p_collision,nbar,s_model\n";
  const int gn = 400;
  for (int i = 1; i <= gn; ++i) {
    double g = 8.0 * static_cast<double>(i) / gn;
    auto p = analysis::slot_probabilities(g);
    append_num(slots, g);
    slots += ',';
    append_num(slots, p.idle);
    slots += ',';
    append_num(slots, p.success);
    slots += ',';
    append_num(slots, p.collision);
    slots += ',';
    append_num(slots, analysis::mean_collision_size(g, cfg.nbar));
    slots += ',';
    append_num(slots, analysis::saturation_throughput(g, model));
    slots += '\n';
  }
  w.add("analyze_slots.csv", slots);

  std::string curve = "alpha,attempt_rate,s_model,drift\n";
  const int an = 200;
  const double lo = std::log(1e-3), hi = std::log(0.5);
  for (int i = 0; i < an; ++i) {
    double alpha = std::exp(lo + (hi - lo) * i / (an - 1));
    double g = factor / alpha;
    append_num(curve, alpha);
    curve += ',';
    append_num(curve, g);
    curve += ',';
    append_num(curve, analysis::saturation_throughput(g, model));
    curve += ',';
    append_num(curve, analysis::expected_drift(alpha, factor, gamma, beta));
    curve += '\n';
  }
  w.add("analyze_alpha.csv", curve);

  json js{{"g_star", g_star},
          {"alpha_star", alpha_star},
          {"attempt_rate_factor", factor},
          {"gamma", gamma},
          {"beta", beta},
          {"t_succ_s", model.t_succ_s},
          {"sigma_s", model.sigma_s},
          {"collision_cost",
           json{{"base_s", model.t_coll.base_s},
                {"per_winner_s", model.t_coll.per_winner_s},
                {"per_tie_s", model.t_coll.per_tie_s}}},
          {"nbar_formula", to_string(cfg.nbar)}};
  w.add("analyze.json", js.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// validate: replay a stored trace against the invariants.
// ---------------------------------------------------------------------------
void experiment_validate(const ExperimentConfig& cfg, Writer& w,
                         std::int64_t& violations) {
  auto trace = engine::read_trace_json(cfg.trace_path);
  auto rep = metrics::validate_trace(trace);
  violations += static_cast<std::int64_t>(rep.violations.size());
  w.add("report.json", metrics::report_json(rep) + "\n");
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  std::string s = engine::scenario_json_string(cfg.scenario);
  s += '|';
  s += to_string(cfg.experiment);
  s += "|seeds";
  for (auto seed : cfg.seeds) {
    s += ',';
    append_num(s, static_cast<std::int64_t>(seed));
  }
  s += "|grid";
  for (double a : cfg.alpha_grid) {
    s += ',';
    append_num(s, a);
  }
  s += "|windows";
  for (auto win : cfg.windows) {
    s += ',';
    append_num(s, win);
  }
  s += '|';
  s += to_string(cfg.nbar);
  return s;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("scenario"))
      cfg.scenario = engine::scenario_from_json_string(j["scenario"].dump());
    if (j.contains("experiment"))
      cfg.experiment = experiment_from_string(j["experiment"].get<std::string>());
    if (j.contains("seeds"))
      cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("alpha_grid"))
      cfg.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
    if (j.contains("windows"))
      cfg.windows = j["windows"].get<std::vector<std::int64_t>>();
    if (j.contains("nbar_formula"))
      cfg.nbar = nbar_from_string(j["nbar_formula"].get<std::string>());
    if (j.contains("out_dir"))
      cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("trace")) cfg.trace_path = j["trace"].get<std::string>();
    if (j.contains("strict")) cfg.strict = j["strict"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("config: seeds: need at least one");
  for (std::size_t i = 0; i < cfg.alpha_grid.size(); ++i) {
    if (cfg.alpha_grid[i] <= 0.0)
      throw ConfigError("config: alpha_grid[" + std::to_string(i) +
                        "]: must be positive");
    if (i > 0 && cfg.alpha_grid[i] <= cfg.alpha_grid[i - 1])
      throw ConfigError("config: alpha_grid[" + std::to_string(i) +
                        "]: must be strictly increasing");
  }
  for (std::size_t i = 0; i < cfg.windows.size(); ++i) {
    if (cfg.windows[i] <= 0)
      throw ConfigError("config: windows[" + std::to_string(i) +
                        "]: must be positive");
  }
  if (cfg.experiment == ExperimentKind::Validate && cfg.trace_path.empty())
    throw ConfigError("config: validate needs a trace path");
  try {
    engine::validate_scenario(cfg.scenario);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: scenario: ") + e.what());
  }
}

ResultBundle run_experiment(const ExperimentConfig& config) {
  auto cfg = config;
  std::sort(cfg.seeds.begin(), cfg.seeds.end());
  cfg.seeds.erase(std::unique(cfg.seeds.begin(), cfg.seeds.end()),
                  cfg.seeds.end());
  validate_config(cfg);

  Writer w{cfg.out_dir, {}};
  std::int64_t violations = 0;
  switch (cfg.experiment) {
    case ExperimentKind::Run: experiment_run(cfg, w, violations); break;
    case ExperimentKind::SweepAlpha: experiment_sweep(cfg, w, violations); break;
    case ExperimentKind::Adaptive: experiment_adaptive(cfg, w, violations); break;
    case ExperimentKind::Compare: experiment_compare(cfg, w, violations); break;
    case ExperimentKind::Analyze: experiment_analyze(cfg, w); break;
    case ExperimentKind::Validate: experiment_validate(cfg, w, violations); break;
  }

  ResultBundle bundle;
  bundle.out_dir = cfg.out_dir;
  bundle.config_digest = fnv1a(config_fingerprint(cfg));
  bundle.violations = violations;

  json files = json::array();
  for (const auto& f : w.files) {
    files.push_back(json{
        {"name", f.name}, {"digest", digest_hex(f.digest)}, {"bytes", f.bytes}});
  }
  json manifest{{"format", "dscfq-manifest-v1"},
                {"experiment", to_string(cfg.experiment)},
                {"config_digest", digest_hex(bundle.config_digest)},
                {"seeds", cfg.seeds},
                {"violations", violations},
                {"files", files}};
  w.add("manifest.json", manifest.dump(2) + "\n");
  bundle.manifest_path = (cfg.out_dir / "manifest.json").string();
  bundle.files = std::move(w.files);
  return bundle;
}

}  // namespace dscfq::tools
