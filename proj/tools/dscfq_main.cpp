#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dscfq/engine.hpp"
#include "experiments.hpp"

using namespace dscfq;

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::optional<double> duration_s;
  std::string algo;
  std::string alpha;  // a number, or "adaptive"
  std::optional<std::int32_t> m;
  std::vector<std::int64_t> windows;
  std::string out;
  std::string nbar;
  std::string trace;
  bool strict = false;
};

sched::SchedulerKind algo_from_string(const std::string& s) {
  if (s == "dscfq") return sched::SchedulerKind::Dscfq;
  if (s == "type1") return sched::SchedulerKind::TypeI;
  if (s == "type2") return sched::SchedulerKind::TypeII;
  throw tools::ConfigError("config: unknown --algo " + s);
}

void apply_overrides(tools::ExperimentConfig& cfg, const CliOptions& opt) {
  if (!opt.seeds.empty()) cfg.seeds = opt.seeds;
  if (opt.seed) cfg.seeds = {*opt.seed};
  if (opt.duration_s) {
    if (*opt.duration_s <= 0.0)
      throw tools::ConfigError("config: --duration must be positive");
    cfg.scenario.duration =
        static_cast<engine::Tick>(std::llround(*opt.duration_s * 1e9));
  }
  if (!opt.algo.empty()) cfg.scenario.scheduler = algo_from_string(opt.algo);
  if (!opt.alpha.empty()) {
    if (opt.alpha == "adaptive") {
      if (!engine::alpha_is_adaptive(cfg.scenario.alpha_policy))
        cfg.scenario.alpha_policy = engine::AdaptiveAlpha{};
    } else {
      try {
        std::size_t used = 0;
        double x = std::stod(opt.alpha, &used);
        if (used != opt.alpha.size()) throw std::invalid_argument(opt.alpha);
        cfg.scenario.alpha_policy = engine::FixedAlpha{x};
      } catch (const std::exception&) {
        throw tools::ConfigError(
            "config: --alpha takes a number or \"adaptive\", got \"" +
            opt.alpha + "\"");
      }
    }
  }
  if (opt.m) cfg.scenario.branch_factor = *opt.m;
  if (!opt.windows.empty()) cfg.windows = opt.windows;
  if (!opt.nbar.empty())
    cfg.nbar = opt.nbar == "paper" ? analysis::NbarFormula::Paper
                                   : analysis::NbarFormula::Exact;
  if (!opt.trace.empty()) cfg.trace_path = opt.trace;
  if (opt.strict) cfg.strict = true;

  // precedence for the output directory: --out, then env, then config
  if (const char* env = std::getenv("DSCFQ_OUT_DIR"); env && *env)
    cfg.out_dir = env;
  if (!opt.out.empty()) cfg.out_dir = opt.out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator for distributed self-clocked fair "
               "queueing on a shared medium"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dscfq 0.1.0");

  CliOptions opt;
  tools::ExperimentKind kind = tools::ExperimentKind::Run;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path,
                    "experiment config JSON; defaults applied for missing keys");
    sub->add_option("--seed", opt.seed, "single seed (overrides --seeds)");
    sub->add_option("--seeds", opt.seeds, "comma-separated seed list")
        ->delimiter(',');
    sub->add_option("--duration", opt.duration_s,
                    "simulated seconds per run");
    sub->add_option("--algo", opt.algo, "scheduler kind")
        ->check(CLI::IsMember({"dscfq", "type1", "type2"}));
    sub->add_option("--alpha", opt.alpha,
                    "scaling factor, a number or \"adaptive\"");
    sub->add_option("--m", opt.m, "splitting branch factor");
    sub->add_option("--out", opt.out,
                    "output directory (DSCFQ_OUT_DIR overrides the config)");
    sub->add_flag("--strict", opt.strict,
                  "exit 3 when any invariant violation is found");
    sub->add_option("--nbar-formula", opt.nbar,
                    "collision-size formula for the analytic model")
        ->check(CLI::IsMember({"exact", "paper"}));
    return sub;
  };

  auto* c_run = add_common(app.add_subcommand(
      "run", "simulate each seed; trace CSV/JSON plus summary"));
  auto* c_sweep = add_common(app.add_subcommand(
      "sweep_alpha", "empirical vs analytic throughput over an alpha grid"));
  auto* c_adapt = add_common(app.add_subcommand(
      "adaptive", "adaptive-alpha trajectory, fairness and throughput series"));
  auto* c_compare = add_common(app.add_subcommand(
      "compare", "windowed fairness of dscfq/type2/type1 on common seeds"));
  c_compare->add_option("--windows", opt.windows,
                        "sliding window sizes (departures)")
      ->delimiter(',');
  auto* c_analyze = add_common(app.add_subcommand(
      "analyze", "closed-form slot probabilities and throughput curves"));
  auto* c_validate = add_common(app.add_subcommand(
      "validate", "replay a stored trace JSON against the invariants"));
  c_validate->add_option("trace", opt.trace, "trace JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (c_run->parsed()) kind = tools::ExperimentKind::Run;
  if (c_sweep->parsed()) kind = tools::ExperimentKind::SweepAlpha;
  if (c_adapt->parsed()) kind = tools::ExperimentKind::Adaptive;
  if (c_compare->parsed()) kind = tools::ExperimentKind::Compare;
  if (c_analyze->parsed()) kind = tools::ExperimentKind::Analyze;
  if (c_validate->parsed()) kind = tools::ExperimentKind::Validate;

  tools::ExperimentConfig cfg;
  try {
    if (!opt.config_path.empty()) cfg = tools::load_config(opt.config_path);
    cfg.experiment = kind;
    apply_overrides(cfg, opt);
  } catch (const tools::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    auto bundle = tools::run_experiment(cfg);
    for (const auto& f : bundle.files) {
      std::printf("wrote %s/%s  %s  %ju bytes\n",
                  bundle.out_dir.string().c_str(), f.name.c_str(),
                  tools::digest_hex(f.digest).c_str(),
                  static_cast<std::uintmax_t>(f.bytes));
    }
    std::printf("manifest %s  config %s\n", bundle.manifest_path.c_str(),
                tools::digest_hex(bundle.config_digest).c_str());
    if (bundle.violations > 0) {
      std::fprintf(stderr, "invariant violations: %lld\n",
                   (long long)bundle.violations);
      if (cfg.strict) return 3;
    }
    return 0;
  } catch (const tools::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
