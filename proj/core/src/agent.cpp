#include "dscfq/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace dscfq::core {

PacketLengthModel PacketLengthModel::fixed(std::int64_t units) {
  PacketLengthModel m;
  m.kind = Kind::Fixed;
  m.fixed_units = units;
  return m;
}

PacketLengthModel PacketLengthModel::uniform(std::int64_t lo, std::int64_t hi) {
  PacketLengthModel m;
  m.kind = Kind::Uniform;
  m.lo_units = lo;
  m.hi_units = hi;
  return m;
}

PacketLengthModel PacketLengthModel::truncated_exponential(double mean,
                                                           std::int64_t max) {
  PacketLengthModel m;
  m.kind = Kind::TruncatedExponential;
  m.mean_units_param = mean;
  m.max_units = max;
  return m;
}

void PacketLengthModel::validate() const {
  switch (kind) {
    case Kind::Fixed:
      if (fixed_units <= 0) {
        throw std::invalid_argument("length model: fixed length must be > 0");
      }
      break;
    case Kind::Uniform:
      if (lo_units <= 0 || hi_units < lo_units) {
        throw std::invalid_argument("length model: need 0 < lo <= hi");
      }
      break;
    case Kind::TruncatedExponential:
      if (mean_units_param <= 0.0 || max_units <= 0) {
        throw std::invalid_argument(
            "length model: mean and max must be positive");
      }
      break;
  }
}

std::int64_t PacketLengthModel::draw(SplitMix64& rng) const {
  switch (kind) {
    case Kind::Fixed:
      return fixed_units;
    case Kind::Uniform:
      return rng.uniform_int(lo_units, hi_units);
    case Kind::TruncatedExponential: {
      // resample past the cap so the cap does not pile mass at max_units
      for (;;) {
        double x = rng.exponential(mean_units_param);
        std::int64_t units = static_cast<std::int64_t>(std::ceil(x));
        if (units < 1) units = 1;
        if (units <= max_units) return units;
      }
    }
  }
  throw std::logic_error("length model: unknown kind");
}

double PacketLengthModel::mean_units() const {
  switch (kind) {
    case Kind::Fixed:
      return static_cast<double>(fixed_units);
    case Kind::Uniform:
      return 0.5 * static_cast<double>(lo_units + hi_units);
    case Kind::TruncatedExponential: {
      // mean of ceil(X) given X <= max, X ~ Exp(mean); close enough to the
      // untruncated mean for reporting, so use the resampled expectation
      double lambda = 1.0 / mean_units_param;
      double z = 1.0 - std::exp(-lambda * static_cast<double>(max_units));
      // E[X | X <= max] for the continuous part, then +0.5 for the ceiling
      double m = mean_units_param -
                 static_cast<double>(max_units) *
                     std::exp(-lambda * static_cast<double>(max_units)) / z;
      return m + 0.5;
    }
  }
  throw std::logic_error("length model: unknown kind");
}

std::int64_t PacketLengthModel::max_length_units() const {
  switch (kind) {
    case Kind::Fixed:
      return fixed_units;
    case Kind::Uniform:
      return hi_units;
    case Kind::TruncatedExponential:
      return max_units;
  }
  throw std::logic_error("length model: unknown kind");
}

}  // namespace dscfq::core
