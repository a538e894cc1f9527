#pragma once

#include <cstdint>

#include "dscfq/agent.hpp"

namespace dscfq::engine {

using core::Tick;

/// Channel and MAC timing. Defaults follow the evaluation setup: 12 Mbps
/// data rate, 6 Mbps control rate, 9 us slots, 10 us SIFS.
struct TimingParams {
  std::int64_t data_rate_bps = 12'000'000;
  std::int64_t ctrl_rate_bps = 6'000'000;
  std::int64_t rts_bits = 160;
  std::int64_t cts_bits = 112;
  std::int64_t ack_bits = 112;
  Tick sigma = 9'000;        // idle slot
  Tick sifs = 10'000;
  Tick propagation = 0;      // one-way, per transmitted frame
  Tick cts_timeout = -1;     // -1 selects the derived default

  // Class I agents (collision resolution) access after hifs, class II after
  // lifs; hifs < lifs gives resolution strict priority.
  Tick hifs() const { return sifs + 2 * sigma; }
  Tick lifs() const { return sifs + 3 * sigma; }

  Tick effective_cts_timeout() const;
  void validate() const;
};

/// Airtime of `bits` at `rate_bps`, rounded to the nearest nanosecond.
Tick airtime_ns(std::int64_t bits, std::int64_t rate_bps);

/// Duration of one successful four-way exchange, excluding the trailing
/// idle slot: RTS + SIFS + CTS + SIFS + payload + SIFS + ACK, with one
/// propagation delay per frame.
Tick frame_exchange_duration(std::int64_t payload_bits, const TimingParams& t);

/// Default CTS wait after a transmitted RTS: SIFS + CTS airtime + sigma.
Tick cts_timeout_default(const TimingParams& t);

/// Wasted airtime of a collided RTS attempt: RTS airtime + CTS timeout.
Tick collided_attempt_duration(const TimingParams& t);

}  // namespace dscfq::engine
