#pragma once

#include <cstdint>
#include <vector>

#include "dscfq/accounting.hpp"
#include "dscfq/scenario.hpp"

namespace dscfq::analysis {

/// Stationary generalized-slot probabilities for total attempt rate G under
/// the Poisson approximation: idle e^-G, success G e^-G, collision the rest.
struct SlotProbabilities {
  double idle = 0.0;
  double success = 0.0;
  double collision = 0.0;
};
SlotProbabilities slot_probabilities(double attempt_rate);

enum class NbarFormula {
  Exact,  // E[n | n >= 2] for n ~ Poisson(G)
  Paper,  // G (1 - e^-G), the unconditioned partial mean
};

/// Mean number of packets delivered by one collision slot. Throws
/// std::domain_error for attempt_rate <= 0 (no collisions to condition on).
double mean_collision_size(double attempt_rate,
                           NbarFormula formula = NbarFormula::Exact);

/// Collision-slot cost for the throughput model. Either a fixed total
/// duration, or a cost that scales with the expected collision size:
/// base + nbar * per_winner + max(nbar - 1, 0) * per_tie.
struct CollisionCost {
  enum class Kind { FixedTotal, CrpScaled } kind = Kind::FixedTotal;
  double fixed_total_s = 0.0;
  double base_s = 0.0;
  double per_winner_s = 0.0;
  double per_tie_s = 0.0;

  static CollisionCost fixed(double total_s);
  static CollisionCost crp_scaled(double base_s, double per_winner_s,
                                  double per_tie_s);
  double total_s(double nbar) const;
};

struct ThroughputModel {
  double mean_payload_bits = 16128.0;
  double data_rate_bps = 12e6;
  double t_succ_s = 0.0;   // successful slot, trailing idle slot included
  double sigma_s = 9e-6;   // idle slot
  CollisionCost t_coll;
  NbarFormula nbar = NbarFormula::Exact;
};

/// Derives the analytic cost model from MAC timing: per-winner and per-tie
/// round costs of the splitting resolution, with pulse lengths approximated
/// by the branch factor.
ThroughputModel model_from_timing(const engine::TimingParams& timing,
                                  double mean_payload_bits,
                                  std::int32_t branch_factor);

/// Saturation throughput at total attempt rate G: delivered payload airtime
/// per unit of medium time. Throws std::domain_error for negative G.
double saturation_throughput(double attempt_rate, const ThroughputModel& model);

/// Argmax of saturation throughput over (0, g_hi], located by a grid
/// pre-scan plus golden-section refinement to |dG| < 1e-6. Throws
/// std::domain_error if the pre-scan shows more than one local maximum.
double optimal_attempt_rate(const ThroughputModel& model, double g_hi = 8.0);

/// beta = gamma * P*_coll / P*_idle, the decrease step that puts the
/// controller's drift zero at g_star.
double derive_beta(double gamma, double g_star);

/// Additive alpha controller: collision slots raise alpha by gamma, idle
/// slots lower it by beta, successes leave it unchanged; clamped to
/// [alpha_min, alpha_max].
struct AdaptiveAlphaController {
  double alpha = 0.2;
  double gamma = 2e-5;
  double beta = 0.0;
  double alpha_min = 1e-4;
  double alpha_max = 1.0;

  void update(core::SlotKind kind);
};

/// Free-function form of the controller step.
double alpha_update(double alpha, core::SlotKind kind, double gamma,
                    double beta, double alpha_min, double alpha_max);

/// Sum over agents of phi_k / mean-length_k, so that G(alpha) = rate / alpha.
/// Saturated agents attempt roughly once per floor(alpha L / phi) idle slots.
double attempt_rate_factor(const engine::Scenario& scenario);
double attempt_rate_from_alpha(const engine::Scenario& scenario, double alpha);

/// Expected per-slot drift of the controller at the given alpha:
/// gamma * P_coll(G(alpha)) - beta * P_idle(G(alpha)). Positive below the
/// throughput-optimal alpha, negative above it.
double expected_drift(double alpha, double attempt_rate_factor, double gamma,
                      double beta);

/// Long-run bound on the normalized-service gap of two continuously
/// backlogged agents: Lmax_k/phi_k + Lmax_j/phi_j + 2/alpha.
struct FairnessBound {
  double value = 0.0;
};
FairnessBound pairwise_fairness_bound(std::int64_t max_len_k_units,
                                      double weight_k,
                                      std::int64_t max_len_j_units,
                                      double weight_j, double alpha);

/// Exact law of the number of simultaneous attempts when agent k attempts
/// independently with probability attempt_probs[k]; index i of the result
/// is P(i attempts).
std::vector<double> poisson_binomial_pmf(const std::vector<double>& attempt_probs);

/// Total variation distance between a finitely supported law and
/// Poisson(mean); Poisson mass beyond the support counts fully.
double total_variation_vs_poisson(const std::vector<double>& pmf, double mean);

}  // namespace dscfq::analysis
