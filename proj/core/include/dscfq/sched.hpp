#pragma once

#include <cstdint>
#include <vector>

#include "dscfq/rng.hpp"

namespace dscfq::sched {

enum class SchedulerKind { Dscfq, TypeI, TypeII };

/// Backoff tag, in whole idle slots.
struct BackoffTag {
  std::int64_t slots = 0;
};

/// Compensation state for one agent. The compensation factor epsilon carries
/// the fractional service debt left by the floor in the tag computation and
/// equals the agent's service deviation at its previous departure.
///
/// Backoff slots and packet lengths are accumulated as exact integers; for a
/// fixed scaling factor, epsilon() is then two divisions and matches the
/// ledger-side deviation bit for bit. A running float is kept alongside for
/// runs where the scaling factor changes between packets.
struct CompensationState {
  std::int64_t total_backoff_slots = 0;
  std::int64_t total_length_units = 0;
  std::int32_t packet_index = 1;  // index of the packet about to be tagged
  double epsilon_running = 0.0;

  double epsilon(double alpha, double weight) const {
    return static_cast<double>(total_backoff_slots) / alpha -
           static_cast<double>(total_length_units) / weight;
  }
};

/// Splitting-algorithm collision counter (0 while class II).
struct CollisionCounter {
  std::int32_t q = 0;
};

/// Binary exponential backoff state for the Type I baseline.
struct BebState {
  std::int32_t cw = 15;
  std::int32_t cw_min = 15;
  std::int32_t cw_max = 1023;
};

/// B = floor(alpha * (L / phi - epsilon)). Throws std::domain_error if the
/// floor argument is negative, which cannot happen while epsilon <= 0 and
/// signals corrupted compensation accounting.
BackoffTag compute_backoff_dscfq(std::int64_t length_units, double weight,
                                 double alpha, double epsilon);

/// epsilon' = epsilon + B/alpha - L/phi, where B must be the tag computed
/// from this state. Advances the packet index.
void update_compensation(CompensationState& state, BackoffTag tag, double alpha,
                         std::int64_t length_units, double weight);

/// B = floor(alpha * L / phi), the compensation-free tag used by both
/// baseline types.
BackoffTag compute_backoff_type_proportional(std::int64_t length_units,
                                             double weight, double alpha);

/// Uniform draw from [0, cw].
BackoffTag beb_draw(std::int32_t cw, core::SplitMix64& rng);

void beb_on_collision(BebState& state);  // cw <- min(2*cw + 1, cw_max)
void beb_on_success(BebState& state);    // cw <- cw_min

/// Pulse length for the splitting algorithm: uniform on
/// [(q-1)*m + 1, q*m]. Throws std::invalid_argument if q < 1 or m < 1.
std::int32_t draw_split_pulse(std::int32_t q, std::int32_t m,
                              core::SplitMix64& rng);

/// One splitting round over the contenders' pulse lengths.
/// A unique maximum wins; a tied maximum means those agents collide again
/// and must have their counters incremented by the caller. Indices refer to
/// positions in `pulses`.
struct CrpRoundOutcome {
  bool has_winner = false;
  std::size_t winner = 0;
  std::vector<std::size_t> tied;  // empty iff has_winner
};
CrpRoundOutcome crp_round(const std::vector<std::int32_t>& pulses);

/// Per-agent scheduler state across all three kinds.
struct AgentSchedState {
  SchedulerKind kind = SchedulerKind::Dscfq;
  CompensationState comp;
  CollisionCounter counter;
  BebState beb;

  bool class_one() const { return counter.q > 0; }
};

/// Collision reaction: DSCFQ and Type II enter (or stay in) the splitting
/// resolution with q incremented; Type I doubles its window instead.
void on_collision(AgentSchedState& state);

/// Successful delivery: leaves the splitting resolution, resets BEB.
void on_success(AgentSchedState& state);

}  // namespace dscfq::sched
