#include "dscfq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dscfq/timing.hpp"

namespace dscfq::analysis {

SlotProbabilities slot_probabilities(double attempt_rate) {
  if (attempt_rate < 0.0) {
    throw std::domain_error("slot probabilities: attempt rate must be >= 0");
  }
  SlotProbabilities p;
  p.idle = std::exp(-attempt_rate);
  p.success = attempt_rate * p.idle;
  p.collision = 1.0 - p.idle - p.success;
  if (p.collision < 0.0) p.collision = 0.0;  // tiny negative round-off
  return p;
}

double mean_collision_size(double attempt_rate, NbarFormula formula) {
  if (!(attempt_rate > 0.0)) {
    throw std::domain_error("mean collision size: attempt rate must be > 0");
  }
  const double g = attempt_rate;
  // 1 - e^-g via expm1 to keep the g -> 0 limit stable
  const double one_minus_exp = -std::expm1(-g);
  if (formula == NbarFormula::Paper) {
    return g * one_minus_exp;
  }
  const double p_coll = one_minus_exp - g * std::exp(-g);
  return g * one_minus_exp / p_coll;
}

CollisionCost CollisionCost::fixed(double total_s) {
  CollisionCost c;
  c.kind = Kind::FixedTotal;
  c.fixed_total_s = total_s;
  return c;
}

CollisionCost CollisionCost::crp_scaled(double base_s, double per_winner_s,
                                        double per_tie_s) {
  CollisionCost c;
  c.kind = Kind::CrpScaled;
  c.base_s = base_s;
  c.per_winner_s = per_winner_s;
  c.per_tie_s = per_tie_s;
  return c;
}

double CollisionCost::total_s(double nbar) const {
  if (kind == Kind::FixedTotal) return fixed_total_s;
  return base_s + nbar * per_winner_s + std::max(nbar - 1.0, 0.0) * per_tie_s;
}

ThroughputModel model_from_timing(const engine::TimingParams& timing,
                                  double mean_payload_bits,
                                  std::int32_t branch_factor) {
  timing.validate();
  if (!(mean_payload_bits > 0.0)) {
    throw std::invalid_argument("model: mean payload must be positive");
  }
  const double ns = 1e-9;
  const double ctrl = static_cast<double>(timing.ctrl_rate_bps);
  const double data = static_cast<double>(timing.data_rate_bps);
  const double rts_s = static_cast<double>(timing.rts_bits) / ctrl;
  const double cts_s = static_cast<double>(timing.cts_bits) / ctrl;
  const double ack_s = static_cast<double>(timing.ack_bits) / ctrl;
  const double sifs_s = static_cast<double>(timing.sifs) * ns;
  const double prop_s = static_cast<double>(timing.propagation) * ns;
  const double sigma_s = static_cast<double>(timing.sigma) * ns;
  const double hifs_s = static_cast<double>(timing.hifs()) * ns;
  const double exchange_s = rts_s + sifs_s + cts_s + sifs_s +
                            mean_payload_bits / data + sifs_s + ack_s +
                            4.0 * prop_s;
  const double attempt_s =
      rts_s + static_cast<double>(timing.effective_cts_timeout()) * ns;
  const double window_s = static_cast<double>(branch_factor) * sigma_s;

  ThroughputModel m;
  m.mean_payload_bits = mean_payload_bits;
  m.data_rate_bps = data;
  m.sigma_s = sigma_s;
  m.t_succ_s = exchange_s + sigma_s;
  // one resolution round per delivery plus roughly one tie round per extra
  // contender; the pulse window is approximated by the branch factor
  m.t_coll = CollisionCost::crp_scaled(attempt_s + sigma_s,
                                       hifs_s + window_s + exchange_s,
                                       hifs_s + window_s + attempt_s);
  return m;
}

double saturation_throughput(double attempt_rate, const ThroughputModel& model) {
  if (attempt_rate < 0.0) {
    throw std::domain_error("throughput: attempt rate must be >= 0");
  }
  if (attempt_rate == 0.0) return 0.0;
  SlotProbabilities p = slot_probabilities(attempt_rate);
  double nbar = mean_collision_size(attempt_rate, model.nbar);
  // every collided packet is delivered by the resolution, so the expected
  // payload per slot is (P_s + nbar P_c) L/C = G L/C
  double payload_s =
      (p.success + nbar * p.collision) * model.mean_payload_bits /
      model.data_rate_bps;
  double slot_s = p.success * model.t_succ_s + p.idle * model.sigma_s +
                  p.collision * model.t_coll.total_s(nbar);
  return payload_s / slot_s;
}

double optimal_attempt_rate(const ThroughputModel& model, double g_hi) {
  if (!(g_hi > 0.0)) {
    throw std::domain_error("optimal attempt rate: need g_hi > 0");
  }
  constexpr std::size_t kGrid = 4096;
  std::vector<double> s(kGrid);
  auto g_at = [&](std::size_t i) {
    return g_hi * static_cast<double>(i + 1) / static_cast<double>(kGrid);
  };
  for (std::size_t i = 0; i < kGrid; ++i) {
    s[i] = saturation_throughput(g_at(i), model);
  }

  // pre-scan: boundary points count as peaks against their one neighbor
  std::size_t peaks = 0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    double left = i > 0 ? s[i - 1] : -std::numeric_limits<double>::infinity();
    double right =
        i + 1 < kGrid ? s[i + 1] : -std::numeric_limits<double>::infinity();
    if (s[i] > left && s[i] > right) {
      ++peaks;
      if (s[i] > s[best]) best = i;
    }
  }
  if (peaks != 1) {
    throw std::domain_error(
        "optimal attempt rate: throughput is not unimodal on (0, g_hi]");
  }

  double lo = best > 0 ? g_at(best - 1) : g_at(0) / 2.0;
  double hi = best + 1 < kGrid ? g_at(best + 1) : g_hi;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = saturation_throughput(x1, model);
  double f2 = saturation_throughput(x2, model);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = saturation_throughput(x2, model);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = saturation_throughput(x1, model);
    }
  }
  return 0.5 * (lo + hi);
}

double derive_beta(double gamma, double g_star) {
  if (!(gamma > 0.0) || !(g_star > 0.0)) {
    throw std::domain_error("derive beta: gamma and g_star must be > 0");
  }
  SlotProbabilities p = slot_probabilities(g_star);
  return gamma * p.collision / p.idle;
}

double alpha_update(double alpha, core::SlotKind kind, double gamma,
                    double beta, double alpha_min, double alpha_max) {
  switch (kind) {
    case core::SlotKind::Collision: alpha += gamma; break;
    case core::SlotKind::Idle: alpha -= beta; break;
    case core::SlotKind::Success: break;
  }
  return std::clamp(alpha, alpha_min, alpha_max);
}

void AdaptiveAlphaController::update(core::SlotKind kind) {
  alpha = alpha_update(alpha, kind, gamma, beta, alpha_min, alpha_max);
}

double attempt_rate_factor(const engine::Scenario& scenario) {
  double factor = 0.0;
  for (const core::AgentSpec& a : scenario.agents) {
    factor += a.weight / a.lengths.mean_units();
  }
  return factor;
}

double attempt_rate_from_alpha(const engine::Scenario& scenario, double alpha) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("attempt rate: alpha must be > 0");
  }
  return attempt_rate_factor(scenario) / alpha;
}

double expected_drift(double alpha, double attempt_rate_factor, double gamma,
                      double beta) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("drift: alpha must be > 0");
  }
  SlotProbabilities p = slot_probabilities(attempt_rate_factor / alpha);
  return gamma * p.collision - beta * p.idle;
}

FairnessBound pairwise_fairness_bound(std::int64_t max_len_k_units,
                                      double weight_k,
                                      std::int64_t max_len_j_units,
                                      double weight_j, double alpha) {
  if (max_len_k_units <= 0 || max_len_j_units <= 0 || !(weight_k > 0.0) ||
      !(weight_j > 0.0) || !(alpha > 0.0)) {
    throw std::domain_error("fairness bound: all arguments must be positive");
  }
  return FairnessBound{static_cast<double>(max_len_k_units) / weight_k +
                       static_cast<double>(max_len_j_units) / weight_j +
                       2.0 / alpha};
}

std::vector<double> poisson_binomial_pmf(
    const std::vector<double>& attempt_probs) {
  for (double p : attempt_probs) {
    if (p < 0.0 || p > 1.0) {
      throw std::domain_error("poisson binomial: probabilities must be in [0,1]");
    }
  }
  std::vector<double> pmf{1.0};
  for (double p : attempt_probs) {
    pmf.push_back(0.0);
    for (std::size_t i = pmf.size() - 1; i > 0; --i) {
      pmf[i] = pmf[i] * (1.0 - p) + pmf[i - 1] * p;
    }
    pmf[0] *= 1.0 - p;
  }
  return pmf;
}

double total_variation_vs_poisson(const std::vector<double>& pmf, double mean) {
  if (mean < 0.0) {
    throw std::domain_error("total variation: mean must be >= 0");
  }
  double poisson = std::exp(-mean);
  double tv = 0.0;
  double poisson_tail = 1.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    tv += std::abs(pmf[i] - poisson);
    poisson_tail -= poisson;
    poisson *= mean / static_cast<double>(i + 1);
  }
  tv += std::max(poisson_tail, 0.0);  // Poisson mass beyond the support
  return 0.5 * tv;
}

}  // namespace dscfq::analysis
