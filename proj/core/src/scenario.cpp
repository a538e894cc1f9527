#include "dscfq/scenario.hpp"

#include <stdexcept>
#include <string>

namespace dscfq::engine {

bool alpha_is_adaptive(const AlphaPolicy& p) {
  return std::holds_alternative<AdaptiveAlpha>(p);
}

double initial_alpha(const AlphaPolicy& p) {
  if (const auto* fixed = std::get_if<FixedAlpha>(&p)) return fixed->alpha;
  return std::get<AdaptiveAlpha>(p).alpha0;
}

void validate_scenario(const Scenario& s) {
  if (s.agents.empty()) {
    throw std::invalid_argument("scenario: agents must not be empty");
  }
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const core::AgentSpec& a = s.agents[i];
    std::string where = "scenario: agent " + std::to_string(i);
    if (!(a.weight > 0.0)) {
      throw std::invalid_argument(where + ": weight must be positive");
    }
    a.lengths.validate();
    if (!a.always_backlogged && !(a.arrival_rate_pps > 0.0)) {
      throw std::invalid_argument(where +
                                  ": arrival rate must be positive when not "
                                  "always backlogged");
    }
  }
  s.timing.validate();
  if (const auto* fixed = std::get_if<FixedAlpha>(&s.alpha_policy)) {
    if (!(fixed->alpha > 0.0)) {
      throw std::invalid_argument("scenario: alpha must be positive");
    }
  } else {
    const auto& ad = std::get<AdaptiveAlpha>(s.alpha_policy);
    if (!(ad.alpha0 > 0.0)) {
      throw std::invalid_argument("scenario: alpha0 must be positive");
    }
    if (!(ad.alpha_min > 0.0) || ad.alpha_max < ad.alpha_min) {
      throw std::invalid_argument(
          "scenario: need 0 < alpha_min <= alpha_max");
    }
    if (ad.alpha0 < ad.alpha_min || ad.alpha0 > ad.alpha_max) {
      throw std::invalid_argument("scenario: alpha0 outside [min, max]");
    }
  }
  if (s.branch_factor < 1) {
    throw std::invalid_argument("scenario: branch factor must be >= 1");
  }
  if (s.cw_min < 0 || s.cw_max < s.cw_min) {
    throw std::invalid_argument("scenario: need 0 <= cw_min <= cw_max");
  }
  if (s.duration < 0) {
    throw std::invalid_argument("scenario: duration must be >= 0");
  }
}

Scenario default_scenario() {
  Scenario s;
  const double weights[] = {10, 10, 10, 8, 8, 8, 2, 2, 1, 1};
  int id = 0;
  for (double w : weights) {
    core::AgentSpec a;
    a.id = "agent" + std::to_string(id++);
    a.weight = w;
    a.lengths = core::PacketLengthModel::uniform(1024, 3008);
    a.always_backlogged = true;
    s.agents.push_back(std::move(a));
  }
  s.alpha_policy = FixedAlpha{0.04};
  s.duration = 40'000'000'000;  // 40 s
  s.seed = 1;
  return s;
}

}  // namespace dscfq::engine
