#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "dscfq/accounting.hpp"

using namespace dscfq::core;

namespace {
std::vector<AgentSpec> two_agents() {
  AgentSpec a;
  a.id = "a";
  a.weight = 8.0;
  a.lengths = PacketLengthModel::fixed(2016);
  AgentSpec b;
  b.id = "b";
  b.weight = 1.0;
  b.lengths = PacketLengthModel::fixed(2016);
  return {a, b};
}
}  // namespace

TEST_CASE("virtual clock advances only on idle slots") {
  NetworkVirtualClock clock(0.04);
  CHECK(clock.value() == 0.0);

  clock.advance(SlotKind::Idle);
  CHECK(clock.value() == 25.0);
  CHECK(clock.idle_slot_count() == 1);

  clock.advance(SlotKind::Success);
  clock.advance(SlotKind::Collision);
  CHECK(clock.value() == 25.0);
  CHECK(clock.idle_slot_count() == 1);

  for (int i = 0; i < 9; ++i) clock.advance(SlotKind::Idle);
  CHECK(clock.value() == 250.0);
}

TEST_CASE("virtual clock carries its reading across a scaling change") {
  NetworkVirtualClock clock(0.04);
  for (int i = 0; i < 10; ++i) clock.advance(SlotKind::Idle);
  CHECK(clock.value() == 250.0);

  clock.set_alpha(0.1);
  CHECK(clock.alpha() == 0.1);
  CHECK(clock.value() == doctest::Approx(250.0).epsilon(1e-12));

  for (int i = 0; i < 4; ++i) clock.advance(SlotKind::Idle);
  CHECK(clock.value() == doctest::Approx(290.0).epsilon(1e-12));
}

TEST_CASE("ledger accumulates normalized service exactly") {
  ServiceLedger ledger(two_agents());
  CHECK(ledger.agent_count() == 2);
  CHECK(ledger.normalized_service(0) == 0.0);

  ledger.record_service(0, 2016);
  CHECK(ledger.cumulative_service_bits(0) == 16128);
  CHECK(ledger.normalized_service(0) == 252.0);

  ledger.record_service(1, 2016);
  ledger.record_service(1, 2016);
  CHECK(ledger.normalized_service(1) == 4032.0);

  // zero-length service is a no-op, not an error
  ledger.record_service(0, 0);
  CHECK(ledger.normalized_service(0) == 252.0);

  CHECK_THROWS_AS(ledger.record_service(0, -1), std::invalid_argument);
  CHECK_THROWS_AS(ledger.record_service(5, 10), std::out_of_range);
}

TEST_CASE("service deviation is the clock minus the agent clock") {
  ServiceLedger ledger(two_agents());
  NetworkVirtualClock clock(0.04);
  for (int i = 0; i < 10; ++i) clock.advance(SlotKind::Idle);

  ledger.record_service(0, 2016);
  CHECK(ledger.service_deviation(0, clock.value()) == -2.0);
  CHECK(service_deviation(ledger, clock, 0) == -2.0);
}

TEST_CASE("absent agents follow the network clock") {
  ServiceLedger ledger(two_agents());
  ledger.record_service(1, 2016);
  CHECK(ledger.agent_virtual_time(1) == 2016.0);

  ledger.sync_absent_agent(1, 5.0);
  CHECK(ledger.agent_virtual_time(1) == 2021.0);

  ledger.sync_absent_agent(1, 0.0);
  CHECK(ledger.agent_virtual_time(1) == 2021.0);

  // 12 idle slots at alpha = 0.04
  ledger.sync_absent_agent(1, 12.0 / 0.04);
  CHECK(ledger.agent_virtual_time(1) == 2321.0);

  ledger.mark_backlogged(1, 100);
  CHECK_THROWS_AS(ledger.sync_absent_agent(1, 1.0), std::logic_error);
}

TEST_CASE("deviation holds still while an agent is absent") {
  ServiceLedger ledger(two_agents());
  NetworkVirtualClock clock(0.04);

  ledger.mark_backlogged(0, 0);
  for (int i = 0; i < 7; ++i) clock.advance(SlotKind::Idle);
  ledger.record_service(0, 2016);
  ledger.mark_absent(0, 1'000);
  const double before = ledger.service_deviation(0, clock.value());

  for (int i = 0; i < 12; ++i) clock.advance(SlotKind::Idle);
  ledger.sync_absent_agent(0, 12.0 / 0.04);
  CHECK(ledger.service_deviation(0, clock.value()) == before);
}

TEST_CASE("backlog intervals record every activity span") {
  ServiceLedger ledger(two_agents());
  CHECK_FALSE(ledger.backlogged(0));

  ledger.mark_backlogged(0, 100);
  CHECK(ledger.backlogged(0));
  ledger.mark_backlogged(0, 150);  // idempotent
  ledger.mark_absent(0, 200);
  ledger.mark_absent(0, 250);  // idempotent
  ledger.mark_backlogged(0, 300);

  const auto& spans = ledger.backlog_intervals(0);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == std::pair<Tick, Tick>{100, 200});
  CHECK(spans[1] == std::pair<Tick, Tick>{300, -1});
}

TEST_CASE("ledger rejects nonpositive weights") {
  auto agents = two_agents();
  agents[1].weight = 0.0;
  CHECK_THROWS_AS(ServiceLedger{agents}, std::invalid_argument);
}
