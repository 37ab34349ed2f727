// Acceptance suite: one PASS/FAIL line per criterion, plus INFO lines that
// report the same properties under the literal stability rule.

#include "mobmarket/allocation.hpp"
#include "mobmarket/generator.hpp"
#include "mobmarket/solver.hpp"

#include "reference.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace mobmarket;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void verdict(int number, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << number << "] " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

void info(const std::string& text) { std::cout << "INFO  " << text << std::endl; }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

GeneratorOptions options(std::uint64_t seed, std::size_t n, std::size_t m, bool degenerate = false) {
  GeneratorOptions g;
  g.seed = seed;
  g.travelers = n;
  g.vehicles = m;
  g.max_capacity = 3;
  g.degenerate = degenerate;
  return g;
}

// Random per-pair payments on the generator's lattice, 0 .. 12.
PaymentSchedule random_payments(const MarketInstance& inst, std::uint64_t seed) {
  std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  PaymentSchedule t(inst.traveler_count(), inst.vehicle_count());
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      if (inst.compatible(i, j)) t.at(i, j) = Money(Money(static_cast<long>((state >> 33) % 25)) / 2);
    }
  }
  return t;
}

bool passes_both(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t, StabilityRule rule) {
  if (!check_feasibility(inst, a, compute_profits(inst, a, t)).verdict) return false;
  return check_stability(inst, a, t, rule).verdict;
}

std::optional<StablePayments> stable(const MarketInstance& inst, const Assignment& a, StabilityRule rule,
                                     CanonicalPoint point = CanonicalPoint::traveler_optimal) {
  auto out = synthesize_stable_payments(inst, a, {rule, point});
  if (auto* sp = std::get_if<StablePayments>(&out)) return *sp;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

void oracle_equivalence() {
  auto start = Clock::now();
  int instances = 0;
  int mismatches = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    GeneratorOptions g = options(1000 + s, 1 + s % 7, 1 + (s / 7) % 4, s % 5 == 0);
    if (s % 7 == 3) g.mode = CostShareMode::explicit_shares;
    if (s % 3 == 1) g.lattice = 3;
    MarketInstance inst = generate_instance(g);
    SolveResult r = solve_optimal_assignment(inst);
    OracleResult o = oracle_optimum(inst);
    ++instances;
    if (r.objective != o.objective) ++mismatches;
  }
  double elapsed = seconds_since(start);
  std::ostringstream d;
  d << instances << " instances, " << mismatches << " objective mismatches, " << fmt_seconds(elapsed);
  verdict(1, "oracle equivalence", mismatches == 0 && instances >= 500 && elapsed < 60, d.str());
}

void welfare_identity() {
  int triples = 0;
  int identity_failures = 0;
  for (std::uint64_t s = 0; s < 150; ++s) {
    MarketInstance inst = generate_instance(options(2000 + s, 1 + s % 5, 1 + s % 3, s % 4 == 0));
    PaymentSchedule t = random_payments(inst, s);
    for_each_assignment(inst, [&](const Assignment& a) {
      Money rhs = 0;
      for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
        if (a.occupancy(j) == 0) rhs += inst.vehicles()[j].operating_cost;
      }
      for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
        if (auto j = a.vehicle_of(i)) rhs += ref::share(inst, i, *j) - *t.at(i, *j);
      }
      ++triples;
      if (welfare_paper(inst, a, t) - welfare_surplus(inst, a) != rhs) ++identity_failures;
    });
  }

  auto coincide = [](const MarketInstance& inst, const PaymentSchedule& t) {
    auto paper = ref::argmax(inst, [&](const Assignment& a) { return welfare_paper(inst, a, t); });
    auto net = ref::argmax(inst, [&](const Assignment& a) {
      Money total = 0;
      for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
        if (auto j = a.vehicle_of(i)) total += ref::value(inst, i, *j) - *t.at(i, *j) - ref::share(inst, i, *j);
      }
      return total;
    });
    return paper.second == net.second;
  };
  int argmax_instances = 0;
  int argmax_mismatches = 0;
  for (std::uint64_t s = 0; s < 120; ++s) {
    MarketInstance inst = generate_instance(options(3000 + s, 2 + s % 4, 1 + s % 3));
    ++argmax_instances;
    if (!coincide(inst, random_payments(inst, s))) ++argmax_mismatches;
  }
  std::ostringstream d;
  d << triples << " (instance, assignment, payment) triples, " << identity_failures << " identity failures; "
    << argmax_instances << " argmax comparisons, " << argmax_mismatches << " with different argmax sets";
  verdict(2, "welfare identity and argmax invariance", identity_failures == 0 && argmax_mismatches == 0 &&
                                                           argmax_instances >= 100,
          d.str());

  // With one seat per vehicle every used vehicle recovers its full cost, so
  // the two objectives differ by the constant total operating cost.
  int unit_mismatches = 0;
  for (std::uint64_t s = 0; s < 120; ++s) {
    GeneratorOptions g = options(3500 + s, 2 + s % 4, 1 + s % 3);
    g.max_capacity = 1;
    MarketInstance inst = generate_instance(g);
    if (!coincide(inst, random_payments(inst, s))) ++unit_mismatches;
  }
  info("argmax invariance with unit capacities: 120 instances, " + std::to_string(unit_mismatches) + " mismatches");
}

void stable_implies_optimal() {
  auto start = Clock::now();
  int instances = 0;
  long assignments = 0;
  long feasible = 0;
  int counterexamples = 0;
  int literal_counterexamples = 0;
  long literal_feasible = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    MarketInstance inst = generate_instance(options(4000 + s, 1 + s % 4, 1 + s % 3, s % 3 == 0));
    OracleResult o = oracle_optimum(inst);
    std::set<Assignment> argmax(o.optimal.begin(), o.optimal.end());
    ++instances;
    for_each_assignment(inst, [&](const Assignment& a) {
      ++assignments;
      if (stable(inst, a, StabilityRule::classic_core)) {
        ++feasible;
        if (!argmax.contains(a)) ++counterexamples;
      }
      if (stable(inst, a, StabilityRule::paper_literal)) {
        ++literal_feasible;
        if (!argmax.contains(a)) ++literal_counterexamples;
      }
    });
  }
  std::ostringstream d;
  d << instances << " instances, " << assignments << " assignments, " << feasible << " with stable payments, "
    << counterexamples << " of them suboptimal, " << fmt_seconds(seconds_since(start));
  verdict(3, "stable implies optimal", counterexamples == 0 && instances >= 200, d.str());
  info("stable implies optimal, literal rule: " + std::to_string(literal_feasible) + " stable, " +
       std::to_string(literal_counterexamples) + " suboptimal");
}

struct CarryOver {
  int qualifying = 0;
  long comparisons = 0;
  long infeasible = 0;  ///< allocation not feasible under the other optimum
  long unstable = 0;    ///< feasible but not stable there
};

CarryOver carry_over(bool zero_v_min, StabilityRule rule, int wanted) {
  CarryOver c;
  for (std::uint64_t s = 0; s < 5000 && c.qualifying < wanted; ++s) {
    MarketInstance inst = generate_instance(options(5000 + s, 2 + s % 5, 1 + s % 3, true));
    if (zero_v_min) {
      auto ts = inst.travelers();
      for (auto& t : ts) t.v_min = 0;
      inst = MarketInstance(inst.network(), ts, inst.vehicles(), inst.cost_share_mode());
    }
    OracleResult o = oracle_optimum(inst);
    if (o.optimal.size() < 2) continue;
    bool counted = false;
    for (const auto& source : o.optimal) {
      auto sp = stable(inst, source, rule);
      if (!sp) continue;
      counted = true;
      for (const auto& other : o.optimal) {
        ++c.comparisons;
        if (!check_feasibility(inst, other, compute_profits(inst, other, sp->payments)).verdict) {
          ++c.infeasible;
        } else if (!check_stability(inst, other, sp->payments, rule).verdict) {
          ++c.unstable;
        }
      }
    }
    if (counted) ++c.qualifying;
  }
  return c;
}

std::string describe(const CarryOver& c) {
  std::ostringstream d;
  d << c.qualifying << " degenerate instances with several optima, " << c.comparisons << " (schedule, optimum) checks, "
    << c.infeasible + c.unstable << " failures (" << c.infeasible << " infeasible under the other optimum, "
    << c.unstable << " feasible but unstable)";
  return d.str();
}

void multiple_optima() {
  CarryOver c = carry_over(false, StabilityRule::classic_core, 60);
  verdict(4, "stability carries across optima", c.infeasible + c.unstable == 0 && c.qualifying >= 50, describe(c));
  info("carry-over with every v_min = 0: " + describe(carry_over(true, StabilityRule::classic_core, 60)));
  info("carry-over, literal rule: " + describe(carry_over(false, StabilityRule::paper_literal, 60)));
}

void convexity() {
  int pairs = 0;
  int blends = 0;
  int failures_here = 0;
  for (std::uint64_t s = 0; s < 2000 && pairs < 120; ++s) {
    MarketInstance inst = generate_instance(options(6000 + s, 2 + s % 5, 1 + s % 4, s % 2 == 0));
    Assignment a = solve_optimal_assignment(inst).assignment;
    for (auto rule : {StabilityRule::classic_core, StabilityRule::paper_literal}) {
      auto lo = stable(inst, a, rule, CanonicalPoint::traveler_optimal);
      auto hi = stable(inst, a, rule, CanonicalPoint::vehicle_optimal);
      if (!lo || !hi || lo->payments == hi->payments) continue;
      if (rule == StabilityRule::classic_core) ++pairs;
      for (Money w : {Money(1, 4), Money(1, 2), Money(3, 4)}) {
        StablePayments mix = blend_allocations(*lo, *hi, w);
        ++blends;
        bool ok = check_feasibility(inst, a, mix.allocation).verdict && check_stability(inst, a, mix.payments, rule).verdict &&
                  mix.allocation == compute_profits(inst, a, mix.payments);
        if (!ok) ++failures_here;
      }
    }
  }
  std::ostringstream d;
  d << pairs << " instances with two distinct stable schedules, " << blends << " blends (both rules), " << failures_here
    << " failures";
  verdict(5, "convexity of the stable set", failures_here == 0 && pairs >= 100, d.str());
}

bool clones(const Traveler& a, const Traveler& b) {
  return a.od == b.od && a.v_max == b.v_max && a.v_min == b.v_min && a.inconvenience == b.inconvenience;
}

void equal_needs() {
  int instances = 0;
  int clone_pairs = 0;
  int unequal = 0;
  int literal_unequal = 0;
  for (std::uint64_t s = 0; s < 3000 && instances < 60; ++s) {
    MarketInstance inst = generate_instance(options(7000 + s, 3 + s % 5, 1 + s % 3, true));
    std::vector<std::pair<std::size_t, std::size_t>> twins;
    for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
      for (std::size_t k = i + 1; k < inst.traveler_count(); ++k) {
        if (clones(inst.travelers()[i], inst.travelers()[k])) twins.push_back({i, k});
      }
    }
    if (twins.empty()) continue;
    Assignment a = solve_optimal_assignment(inst).assignment;
    auto profit = [&](const StablePayments& sp, std::size_t i) {
      auto j = a.vehicle_of(i);
      return j ? *sp.allocation.traveler_profit.at(i, *j) : Money(0);
    };
    bool counted = false;
    for (auto point : {CanonicalPoint::traveler_optimal, CanonicalPoint::vehicle_optimal}) {
      if (auto sp = stable(inst, a, StabilityRule::classic_core, point)) {
        counted = true;
        for (auto [i, k] : twins) {
          ++clone_pairs;
          if (profit(*sp, i) != profit(*sp, k)) ++unequal;
        }
      }
      if (auto sp = stable(inst, a, StabilityRule::paper_literal, point)) {
        for (auto [i, k] : twins) {
          if (profit(*sp, i) != profit(*sp, k)) ++literal_unequal;
        }
      }
    }
    if (counted) ++instances;
  }
  std::ostringstream d;
  d << instances << " instances with clones, " << clone_pairs << " clone comparisons, " << unequal << " unequal";
  verdict(6, "equal needs, equal profits", unequal == 0 && instances >= 50, d.str());
  info("equal needs, literal rule: " + std::to_string(literal_unequal) + " unequal clone pairs");
}

void lp_integrality() {
  auto start = Clock::now();
  int instances = 0;
  int bad = 0;
  for (std::uint64_t s = 0; s < 220; ++s) {
    GeneratorOptions g = options(8000 + s, 1 + s % 7, 1 + s % 4, s % 4 == 0);
    if (s % 5 == 2) g.mode = CostShareMode::explicit_shares;
    MarketInstance inst = generate_instance(g);
    auto weights = objective_weights(inst, Objective::surplus);
    LpRelaxationResult lp = solve_lp_relaxation(inst, weights);
    SolveResult r = solve_optimal_assignment(inst);
    ++instances;
    if (!lp.integral || lp.objective != r.objective || !lp.assignment ||
        matched_weight(weights, *lp.assignment) != r.objective) {
      ++bad;
    }
  }
  std::ostringstream d;
  d << instances << " relaxations, " << bad << " fractional or disagreeing, " << fmt_seconds(seconds_since(start));
  verdict(7, "LP relaxation is integral", bad == 0 && instances >= 200, d.str());
}

// Moves variable k of `t` so that row r is violated; nullopt if that needs a negative payment.
std::optional<PaymentSchedule> mutate(const StabilitySystem& sys, std::size_t r, std::size_t k, const PaymentSchedule& t) {
  const lp::Row& row = sys.problem.rows[r];
  const Money& coef = row.coefficients[k];
  if (coef == 0 || row.relation == lp::Relation::equal) return std::nullopt;
  Money lhs = 0;
  for (std::size_t v = 0; v < sys.pairs.size(); ++v) {
    lhs += row.coefficients[v] * *t.at(sys.pairs[v].first, sys.pairs[v].second);
  }
  // Target a left-hand side just past the bound.
  const Money overshoot(1, 2);
  Money target = row.relation == lp::Relation::less_equal ? Money(row.rhs + overshoot) : Money(row.rhs - overshoot);
  auto [i, j] = sys.pairs[k];
  Money moved = *t.at(i, j) + (target - lhs) / coef;
  if (moved < 0) return std::nullopt;
  PaymentSchedule out = t;
  out.at(i, j) = moved;
  return out;
}

bool feasibility_row(const std::string& label) {
  return label.starts_with("vehicle profit nonnegative") || label.starts_with("traveler profit nonnegative");
}

void checker_soundness() {
  long outputs = 0;
  long output_failures = 0;
  long certificates = 0;
  long bad_certificates = 0;
  long mutations = 0;
  long unflipped = 0;
  long through_feasibility = 0;
  for (std::uint64_t s = 0; s < 120; ++s) {
    MarketInstance inst = generate_instance(options(9000 + s, 1 + s % 4, 1 + s % 3, s % 2 == 0));
    for_each_assignment(inst, [&](const Assignment& a) {
      for (auto rule : {StabilityRule::classic_core, StabilityRule::paper_literal}) {
        for (auto point : {CanonicalPoint::traveler_optimal, CanonicalPoint::vehicle_optimal}) {
          auto out = synthesize_stable_payments(inst, a, {rule, point});
          if (const auto* bad = std::get_if<InfeasibleStability>(&out)) {
            ++certificates;
            if (!lp::verify_certificate(bad->system, bad->certificate)) ++bad_certificates;
            break;  // the other point has the same system
          }
          const auto& sp = std::get<StablePayments>(out);
          ++outputs;
          if (!passes_both(inst, a, sp.payments, rule) || sp.allocation != compute_profits(inst, a, sp.payments)) {
            ++output_failures;
          }
          if (point != CanonicalPoint::traveler_optimal) continue;
          StabilitySystem sys = build_stability_system(inst, a, rule);
          for (std::size_t r = 0; r < sys.problem.rows.size(); ++r) {
            for (std::size_t k = 0; k < sys.pairs.size(); ++k) {
              auto mutated = mutate(sys, r, k, sp.payments);
              if (!mutated) continue;
              ++mutations;
              const bool feasible = check_feasibility(inst, a, compute_profits(inst, a, *mutated)).verdict;
              bool flipped;
              if (feasibility_row(sys.problem.rows[r].label)) {
                flipped = !feasible;
              } else if (!feasible) {
                // Stability is undefined once the allocation is infeasible.
                ++through_feasibility;
                flipped = true;
              } else {
                flipped = !check_stability(inst, a, *mutated, rule).verdict;
              }
              if (!flipped) ++unflipped;
            }
          }
        }
      }
    });
  }
  std::ostringstream d;
  d << outputs << " synthesized schedules (" << output_failures << " rejected), " << certificates << " certificates ("
    << bad_certificates << " invalid), " << mutations << " mutations (" << unflipped << " not detected, "
    << through_feasibility << " caught by feasibility first)";
  verdict(8, "checker soundness", output_failures == 0 && bad_certificates == 0 && unflipped == 0 && mutations >= 100,
          d.str());
}

}  // namespace

int main() {
  auto start = Clock::now();
  oracle_equivalence();
  welfare_identity();
  stable_implies_optimal();
  multiple_optima();
  convexity();
  equal_needs();
  lp_integrality();
  checker_soundness();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << " in "
            << fmt_seconds(seconds_since(start)) << std::endl;
  return failures == 0 ? 0 : 1;
}
