#pragma once

#include <cstdint>
#include <string>

#include "dscfq/rng.hpp"

namespace dscfq::core {

/// Simulation time in integer nanoseconds.
using Tick = std::int64_t;

/// Agent index into the scenario's agent list.
using AgentId = std::int32_t;

/// Per-packet length distribution. Lengths are in scheduler length units
/// (bytes); the timing overlay converts to bits at 8 bits per unit.
struct PacketLengthModel {
  enum class Kind { Fixed, Uniform, TruncatedExponential };

  Kind kind = Kind::Fixed;
  std::int64_t fixed_units = 2016;
  std::int64_t lo_units = 0;  // uniform, inclusive
  std::int64_t hi_units = 0;
  double mean_units_param = 0.0;  // truncated exponential
  std::int64_t max_units = 0;

  static PacketLengthModel fixed(std::int64_t units);
  static PacketLengthModel uniform(std::int64_t lo, std::int64_t hi);
  static PacketLengthModel truncated_exponential(double mean, std::int64_t max);

  std::int64_t draw(SplitMix64& rng) const;
  double mean_units() const;
  std::int64_t max_length_units() const;
  void validate() const;  // throws std::invalid_argument
};

struct AgentSpec {
  std::string id;
  double weight = 1.0;  // strictly positive
  PacketLengthModel lengths;
  bool always_backlogged = true;
  double arrival_rate_pps = 0.0;  // Poisson arrivals when not saturated
};

}  // namespace dscfq::core
