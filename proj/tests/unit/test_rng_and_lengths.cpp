#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dscfq/agent.hpp"
#include "dscfq/rng.hpp"

using namespace dscfq::core;

namespace {
std::vector<std::uint64_t> take(SplitMix64 rng, int n) {
  std::vector<std::uint64_t> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(rng.next());
  return v;
}
}  // namespace

TEST_CASE("substreams are reproducible") {
  CHECK(take(substream(1, 0, StreamKind::PacketLength), 16) ==
        take(substream(1, 0, StreamKind::PacketLength), 16));
  CHECK(take(substream(42, 3, StreamKind::Beb), 16) ==
        take(substream(42, 3, StreamKind::Beb), 16));
}

TEST_CASE("substreams differ across seed, agent and kind") {
  auto base = take(substream(1, 0, StreamKind::PacketLength), 8);
  CHECK(base != take(substream(2, 0, StreamKind::PacketLength), 8));
  CHECK(base != take(substream(1, 1, StreamKind::PacketLength), 8));
  CHECK(base != take(substream(1, 0, StreamKind::Beb), 8));
}

TEST_CASE("uniform_int covers both endpoints") {
  auto rng = substream(5, 0, StreamKind::Aux);
  bool lo_hit = false, hi_hit = false;
  for (int i = 0; i < 10'000; ++i) {
    auto x = rng.uniform_int(0, 3);
    CHECK(x >= 0);
    CHECK(x <= 3);
    lo_hit |= (x == 0);
    hi_hit |= (x == 3);
  }
  CHECK(lo_hit);
  CHECK(hi_hit);
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  auto rng = substream(5, 1, StreamKind::Aux);
  for (int i = 0; i < 10'000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("fixed length model is constant") {
  auto m = PacketLengthModel::fixed(2016);
  auto rng = substream(1, 0, StreamKind::PacketLength);
  for (int i = 0; i < 100; ++i) CHECK(m.draw(rng) == 2016);
  CHECK(m.mean_units() == 2016.0);
  CHECK(m.max_length_units() == 2016);
}

TEST_CASE("uniform length model spans its range") {
  auto m = PacketLengthModel::uniform(1024, 3008);
  CHECK(m.mean_units() == 2016.0);
  CHECK(m.max_length_units() == 3008);

  auto rng = substream(1, 0, StreamKind::PacketLength);
  double sum = 0.0;
  std::int64_t lo = 1 << 30, hi = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    auto x = m.draw(rng);
    CHECK(x >= 1024);
    CHECK(x <= 3008);
    sum += static_cast<double>(x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo < 1100);
  CHECK(hi > 2930);
  CHECK(sum / n == doctest::Approx(2016.0).epsilon(0.005));
}

TEST_CASE("truncated exponential stays within its cap") {
  auto m = PacketLengthModel::truncated_exponential(500.0, 1500);
  CHECK(m.max_length_units() == 1500);

  auto rng = substream(9, 0, StreamKind::PacketLength);
  double sum = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    auto x = m.draw(rng);
    CHECK(x >= 1);
    CHECK(x <= 1500);
    sum += static_cast<double>(x);
  }
  CHECK(sum / n == doctest::Approx(m.mean_units()).epsilon(0.02));
}

TEST_CASE("length model validation") {
  CHECK_THROWS_AS(PacketLengthModel::fixed(0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(PacketLengthModel::uniform(10, 5).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(PacketLengthModel::uniform(0, 5).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(PacketLengthModel::truncated_exponential(-1.0, 100).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(PacketLengthModel::truncated_exponential(50.0, 0).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(PacketLengthModel::uniform(1024, 3008).validate());
}
