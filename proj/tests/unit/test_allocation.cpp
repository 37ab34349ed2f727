#include "mobmarket/allocation.hpp"
#include "mobmarket/errors.hpp"

#include "fixtures.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <random>

using namespace mobmarket;
using namespace fixtures;

namespace {

bool has_violation(const CheckReport& r, ConstraintKind kind, std::size_t i, std::optional<std::size_t> j) {
  for (const auto& v : r.violations) {
    if (v.kind == kind && v.traveler == i && v.vehicle == j) return true;
  }
  return false;
}

// Canonical instance plus V2 on the same route with one seat and cost 4.
MarketInstance with_second_vehicle() {
  return MarketInstance(abc(),
                        {traveler("T1", "A", "C", 10, 1, {{"V1", 2}, {"V2", 0}}),
                         traveler("T2", "B", "C", 6, 0, {{"V1", 0}})},
                        {vehicle("V1", {"e1", "e2"}, 2, 4), vehicle("V2", {"e1", "e2"}, 1, 4)});
}

}  // namespace

TEST_CASE("profits on the canonical instance") {
  MarketInstance inst = canonical();
  auto alloc = compute_profits(inst, assignment({0, 0}), payments(inst, {{0, 0, 3}, {1, 0, 2}}));
  CHECK(*alloc.vehicle_profit.at(0, 0) == 1);
  CHECK(*alloc.traveler_profit.at(0, 0) == 4);
  CHECK(*alloc.vehicle_profit.at(1, 0) == 0);
  CHECK(*alloc.traveler_profit.at(1, 0) == 4);

  auto empty = compute_profits(inst, assignment({std::nullopt, std::nullopt}), payments(inst, {{0, 0, 3}, {1, 0, 2}}));
  CHECK(*empty.vehicle_profit.at(0, 0) == 0);
  CHECK(*empty.traveler_profit.at(0, 0) == 0);
  CHECK(*empty.vehicle_profit.at(1, 0) == 0);
  CHECK(*empty.traveler_profit.at(1, 0) == 0);
}

TEST_CASE("feasibility examples") {
  MarketInstance inst = canonical();
  Assignment a = assignment({0, 0});
  auto ok = check_feasibility(inst, a, compute_profits(inst, a, payments(inst, {{0, 0, 3}, {1, 0, 2}})));
  CHECK(ok.verdict);
  REQUIRE(ok.utility_identity.size() == 2);
  CHECK_FALSE(ok.utility_identity[0].holds);

  // The literal identity holds exactly when the payment equals v_min.
  auto at_floor = check_feasibility(inst, a, compute_profits(inst, a, payments(inst, {{0, 0, 1}, {1, 0, 2}})));
  CHECK(at_floor.utility_identity[0].holds);

  auto bad = check_feasibility(inst, a, compute_profits(inst, a, payments(inst, {{0, 0, 9}, {1, 0, 2}})));
  CHECK_FALSE(bad.verdict);
  CHECK(has_violation(bad, ConstraintKind::traveler_profit_nonnegative, 0, 0));

  auto edited = compute_profits(inst, a, payments(inst, {{0, 0, 3}, {1, 0, 2}}));
  edited.traveler_profit.at(0, 0) = Money(5);
  auto broken = check_feasibility(inst, a, edited);
  CHECK_FALSE(broken.verdict);
  CHECK(has_violation(broken, ConstraintKind::profit_identity, 0, 0));

  auto idle = compute_profits(inst, assignment({std::nullopt, std::nullopt}), payments(inst, {{0, 0, 3}, {1, 0, 2}}));
  idle.vehicle_profit.at(1, 0) = Money(1);
  idle.traveler_profit.at(0, 0) = Money(1);
  auto r = check_feasibility(inst, assignment({std::nullopt, std::nullopt}), idle);
  CHECK(has_violation(r, ConstraintKind::idle_vehicle_profit_zero, 1, 0));
  CHECK(has_violation(r, ConstraintKind::unassigned_traveler_profit_zero, 0, 0));

  CHECK_THROWS_AS(check_feasibility(inst, a, ProfitAllocation{}), std::invalid_argument);
}

TEST_CASE("stability examples") {
  MarketInstance inst = canonical();
  Assignment a = assignment({0, 0});
  auto t3 = payments(inst, {{0, 0, 3}, {1, 0, 2}});
  CHECK(check_stability(inst, a, t3, StabilityRule::paper_literal).verdict);
  CHECK(check_stability(inst, a, t3, StabilityRule::classic_core).verdict);

  auto t7 = payments(inst, {{0, 0, 7}, {1, 0, 2}});
  auto literal = check_stability(inst, a, t7, StabilityRule::paper_literal);
  CHECK_FALSE(literal.verdict);
  CHECK(has_violation(literal, ConstraintKind::prefers_staying_home, 0, 0));
  // Without the second subtraction of the share the traveler still gains 1.
  CHECK(check_stability(inst, a, t7, StabilityRule::classic_core).verdict);

  MarketInstance two = with_second_vehicle();
  auto t = payments(two, {{0, 0, 3}, {0, 1, 0}, {1, 0, 2}});
  for (auto rule : {StabilityRule::paper_literal, StabilityRule::classic_core}) {
    auto r = check_stability(two, a, t, rule);
    CHECK_FALSE(r.verdict);
    CHECK(has_violation(r, ConstraintKind::prefers_other_vehicle, 0, 1));
  }
}

TEST_CASE("prohibitive counterfactual prices are rejected") {
  MarketInstance two = with_second_vehicle();
  // T1 on V1 at 3; quoting 100 on the empty V2 would hide T1's better option.
  auto t = payments(two, {{0, 0, 3}, {0, 1, 100}, {1, 0, 2}});
  auto r = check_stability(two, assignment({0, 0}), t);
  CHECK_FALSE(r.verdict);
  CHECK(has_violation(r, ConstraintKind::counterfactual_price, 0, 1));
  CHECK_FALSE(ref::core_stable(two, assignment({0, 0}), t));
}

TEST_CASE("stability is undefined for an infeasible allocation") {
  MarketInstance inst = canonical();
  CHECK_THROWS_AS(check_stability(inst, assignment({0, 0}), payments(inst, {{0, 0, 9}, {1, 0, 2}})),
                  InfeasibleAllocationError);
  CHECK_THROWS_AS(check_stability(inst, assignment({0, 0}), payments(inst, {{0, 0, 3}})), ValidationError);
}

TEST_CASE("synthesis on the canonical instance") {
  MarketInstance inst = canonical();
  Assignment a = assignment({0, 0});
  for (auto rule : {StabilityRule::classic_core, StabilityRule::paper_literal}) {
    for (auto point : {CanonicalPoint::traveler_optimal, CanonicalPoint::vehicle_optimal}) {
      auto out = synthesize_stable_payments(inst, a, {rule, point});
      REQUIRE(std::holds_alternative<StablePayments>(out));
      const auto& sp = std::get<StablePayments>(out);
      // The literal rule caps payments at v - c; the core rule only at v - v_min.
      const bool literal = rule == StabilityRule::paper_literal;
      CHECK(*sp.payments.at(0, 0) >= 2);
      CHECK(*sp.payments.at(0, 0) <= (literal ? 6 : 7));
      CHECK(*sp.payments.at(1, 0) >= 0);
      CHECK(*sp.payments.at(1, 0) <= (literal ? 4 : 6));
      CHECK(check_feasibility(inst, a, sp.allocation).verdict);
      CHECK(check_stability(inst, a, sp.payments, rule).verdict);
    }
  }
  auto lo = std::get<StablePayments>(synthesize_stable_payments(inst, a));
  CHECK(*lo.payments.at(0, 0) == 2);
  CHECK(*lo.payments.at(1, 0) == 2);
  auto hi = std::get<StablePayments>(synthesize_stable_payments(inst, a, {StabilityRule::classic_core, CanonicalPoint::vehicle_optimal}));
  CHECK(*hi.payments.at(0, 0) == 7);
  CHECK(*hi.payments.at(1, 0) == 6);
}

TEST_CASE("suboptimal assignment leaving a profitable traveler out is infeasible") {
  MarketInstance inst = canonical();
  for (auto rule : {StabilityRule::classic_core, StabilityRule::paper_literal}) {
    auto out = synthesize_stable_payments(inst, assignment({std::nullopt, 0}), {rule, CanonicalPoint::traveler_optimal});
    REQUIRE(std::holds_alternative<InfeasibleStability>(out));
    const auto& bad = std::get<InfeasibleStability>(out);
    CHECK(lp::verify_certificate(bad.system, bad.certificate));
  }
}

TEST_CASE("synthesis with no travelers") {
  MarketInstance inst(abc(), {}, {vehicle("V1", {"e1", "e2"}, 2, 4)});
  auto out = synthesize_stable_payments(inst, Assignment(0));
  REQUIRE(std::holds_alternative<StablePayments>(out));
  CHECK(std::get<StablePayments>(out).payments.traveler_count() == 0);
}

TEST_CASE("blending") {
  MarketInstance inst = canonical();
  Assignment a = assignment({0, 0});
  auto lo = std::get<StablePayments>(synthesize_stable_payments(inst, a));
  auto hi = std::get<StablePayments>(synthesize_stable_payments(inst, a, {StabilityRule::classic_core, CanonicalPoint::vehicle_optimal}));
  CHECK(blend_allocations(lo, hi, 0).payments == hi.payments);
  CHECK(blend_allocations(lo, hi, 0).allocation == hi.allocation);
  CHECK(blend_allocations(lo, hi, 1).payments == lo.payments);
  auto mid = blend_allocations(lo, hi, Money(1, 2));
  CHECK(*mid.payments.at(0, 0) == Money(9, 2));
  CHECK(mid.allocation == compute_profits(inst, a, mid.payments));
  CHECK(check_feasibility(inst, a, mid.allocation).verdict);
  CHECK(check_stability(inst, a, mid.payments).verdict);
  CHECK_THROWS_AS(blend_allocations(lo, hi, Money(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(blend_allocations(lo, StablePayments{}, Money(1, 2)), std::invalid_argument);
}

TEST_CASE("synthesized schedules have no blocking pair") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    GeneratorOptions g;
    g.seed = seed;
    g.travelers = 2 + seed % 4;
    g.vehicles = 1 + seed % 3;
    g.degenerate = seed % 2 == 0;
    MarketInstance inst = generate_instance(g);
    CAPTURE(seed);
    for (const auto& a : ref::all_assignments(inst)) {
      for (auto rule : {StabilityRule::classic_core, StabilityRule::paper_literal}) {
        auto out = synthesize_stable_payments(inst, a, {rule, CanonicalPoint::traveler_optimal});
        if (const auto* sp = std::get_if<StablePayments>(&out)) {
          CHECK(ref::core_stable(inst, a, sp->payments, rule == StabilityRule::paper_literal));
          CHECK(check_stability(inst, a, sp->payments, rule).verdict);
        } else {
          const auto& bad = std::get<InfeasibleStability>(out);
          CHECK(lp::verify_certificate(bad.system, bad.certificate));
        }
      }
    }
  }
}

TEST_CASE("checker verdict implies no blocking pair on random schedules") {
  std::mt19937 rng(3);
  int stable_seen = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorOptions g;
    g.seed = seed;
    g.travelers = 3;
    g.vehicles = 2;
    MarketInstance inst = generate_instance(g);
    for (const auto& a : ref::all_assignments(inst)) {
      for (int draw = 0; draw < 5; ++draw) {
        PaymentSchedule t(inst.traveler_count(), inst.vehicle_count());
        for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
          for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
            if (inst.compatible(i, j)) t.at(i, j) = Money(Money(static_cast<long>(rng() % 25)) / 2);
          }
        }
        if (!check_feasibility(inst, a, compute_profits(inst, a, t)).verdict) continue;
        if (check_stability(inst, a, t).verdict) {
          ++stable_seen;
          CHECK(ref::core_stable(inst, a, t));
        }
      }
    }
  }
  CHECK(stable_seen > 0);
}
