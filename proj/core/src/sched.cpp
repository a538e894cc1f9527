#include "dscfq/sched.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dscfq::sched {

BackoffTag compute_backoff_dscfq(std::int64_t length_units, double weight,
                                 double alpha, double epsilon) {
  if (length_units <= 0) {
    throw std::invalid_argument("backoff: packet length must be positive");
  }
  if (!(weight > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("backoff: weight and alpha must be positive");
  }
  double arg = alpha * (static_cast<double>(length_units) / weight - epsilon);
  if (arg < 0.0) {
    throw std::domain_error("backoff: negative tag argument");
  }
  return BackoffTag{static_cast<std::int64_t>(std::floor(arg))};
}

void update_compensation(CompensationState& state, BackoffTag tag, double alpha,
                         std::int64_t length_units, double weight) {
  state.total_backoff_slots += tag.slots;
  state.total_length_units += length_units;
  state.epsilon_running += static_cast<double>(tag.slots) / alpha -
                           static_cast<double>(length_units) / weight;
  ++state.packet_index;
}

BackoffTag compute_backoff_type_proportional(std::int64_t length_units,
                                             double weight, double alpha) {
  if (length_units <= 0) {
    throw std::invalid_argument("backoff: packet length must be positive");
  }
  if (!(weight > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("backoff: weight and alpha must be positive");
  }
  double arg = alpha * static_cast<double>(length_units) / weight;
  return BackoffTag{static_cast<std::int64_t>(std::floor(arg))};
}

BackoffTag beb_draw(std::int32_t cw, core::SplitMix64& rng) {
  if (cw < 0) {
    throw std::invalid_argument("beb: contention window must be >= 0");
  }
  return BackoffTag{
      static_cast<std::int64_t>(rng.uniform_int(0, static_cast<std::int64_t>(cw)))};
}

void beb_on_collision(BebState& state) {
  state.cw = std::min(2 * state.cw + 1, state.cw_max);
}

void beb_on_success(BebState& state) { state.cw = state.cw_min; }

std::int32_t draw_split_pulse(std::int32_t q, std::int32_t m,
                              core::SplitMix64& rng) {
  if (q < 1 || m < 1) {
    throw std::invalid_argument("split pulse: need q >= 1 and m >= 1");
  }
  std::int64_t lo = static_cast<std::int64_t>(q - 1) * m + 1;
  std::int64_t hi = static_cast<std::int64_t>(q) * m;
  return static_cast<std::int32_t>(rng.uniform_int(lo, hi));
}

CrpRoundOutcome crp_round(const std::vector<std::int32_t>& pulses) {
  if (pulses.size() < 2) {
    throw std::invalid_argument("splitting round: need at least two contenders");
  }
  std::int32_t best = *std::max_element(pulses.begin(), pulses.end());
  CrpRoundOutcome out;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    if (pulses[i] == best) out.tied.push_back(i);
  }
  if (out.tied.size() == 1) {
    out.has_winner = true;
    out.winner = out.tied.front();
    out.tied.clear();
  }
  return out;
}

void on_collision(AgentSchedState& state) {
  if (state.kind == SchedulerKind::TypeI) {
    beb_on_collision(state.beb);
  } else {
    ++state.counter.q;
  }
}

void on_success(AgentSchedState& state) {
  state.counter.q = 0;
  beb_on_success(state.beb);
}

}  // namespace dscfq::sched
