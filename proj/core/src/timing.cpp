#include "dscfq/timing.hpp"

#include <stdexcept>

namespace dscfq::engine {

Tick airtime_ns(std::int64_t bits, std::int64_t rate_bps) {
  if (bits < 0 || rate_bps <= 0) {
    throw std::invalid_argument("airtime_ns: bits must be >= 0 and rate > 0");
  }
  // round to nearest nanosecond, half away from zero
  return (bits * 1'000'000'000 + rate_bps / 2) / rate_bps;
}

Tick cts_timeout_default(const TimingParams& t) {
  return t.sifs + airtime_ns(t.cts_bits, t.ctrl_rate_bps) + t.sigma;
}

Tick TimingParams::effective_cts_timeout() const {
  return cts_timeout >= 0 ? cts_timeout : cts_timeout_default(*this);
}

void TimingParams::validate() const {
  if (data_rate_bps <= 0 || ctrl_rate_bps <= 0) {
    throw std::invalid_argument("timing: rates must be positive");
  }
  if (rts_bits <= 0 || cts_bits <= 0 || ack_bits <= 0) {
    throw std::invalid_argument("timing: control frame sizes must be positive");
  }
  if (sigma <= 0) {
    throw std::invalid_argument("timing: sigma must be positive");
  }
  if (sifs < 0 || propagation < 0) {
    throw std::invalid_argument("timing: sifs and propagation must be >= 0");
  }
}

Tick frame_exchange_duration(std::int64_t payload_bits, const TimingParams& t) {
  // RTS/CTS/DATA/ACK with a SIFS before each response and the propagation
  // delay crossed four times.
  return airtime_ns(t.rts_bits, t.ctrl_rate_bps) + t.sifs +
         airtime_ns(t.cts_bits, t.ctrl_rate_bps) + t.sifs +
         airtime_ns(payload_bits, t.data_rate_bps) + t.sifs +
         airtime_ns(t.ack_bits, t.ctrl_rate_bps) + 4 * t.propagation;
}

Tick collided_attempt_duration(const TimingParams& t) {
  return airtime_ns(t.rts_bits, t.ctrl_rate_bps) + t.effective_cts_timeout();
}

}  // namespace dscfq::engine
