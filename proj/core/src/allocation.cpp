#include "mobmarket/allocation.hpp"

#include "mobmarket/errors.hpp"

#include <utility>

namespace mobmarket {

const char* to_string(StabilityRule rule) {
  return rule == StabilityRule::classic_core ? "classic-core" : "paper-literal";
}

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::traveler_profit_nonnegative: return "traveler-profit-nonnegative";
    case ConstraintKind::vehicle_profit_nonnegative: return "vehicle-profit-nonnegative";
    case ConstraintKind::profit_identity: return "profit-identity";
    case ConstraintKind::idle_vehicle_profit_zero: return "idle-vehicle-profit-zero";
    case ConstraintKind::unassigned_traveler_profit_zero: return "unassigned-traveler-profit-zero";
    case ConstraintKind::prefers_other_vehicle: return "prefers-other-vehicle";
    case ConstraintKind::prefers_staying_home: return "prefers-unassigned";
    case ConstraintKind::unassigned_wants_vehicle: return "unassigned-wants-vehicle";
    case ConstraintKind::counterfactual_price: return "counterfactual-price";
  }
  return "unknown";
}

ProfitAllocation compute_profits(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t) {
  validate_assignment(inst, a);
  const std::size_t n = inst.traveler_count();
  const std::size_t m = inst.vehicle_count();
  ProfitAllocation alloc{PairMatrix<Money>(n, m), PairMatrix<Money>(n, m)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.compatible(i, j)) continue;
      alloc.traveler_profit.at(i, j) = Money(0);
      alloc.vehicle_profit.at(i, j) = Money(0);
      if (!a.is_matched(i, j)) continue;
      if (t.traveler_count() != n || t.vehicle_count() != m || !t.has(i, j)) {
        throw ValidationError("payments", inst.travelers()[i].id + " " + inst.vehicles()[j].id,
                              "missing payment for matched pair");
      }
      const Money& pay = *t.at(i, j);
      alloc.vehicle_profit.at(i, j) = Money(pay - cost_share(inst, i, j));
      alloc.traveler_profit.at(i, j) = Money(valuation(inst, i, j) - pay - inst.travelers()[i].v_min);
    }
  }
  return alloc;
}

FeasibilityReport check_feasibility(const MarketInstance& inst, const Assignment& a,
                                    const ProfitAllocation& alloc) {
  validate_assignment(inst, a);
  const std::size_t n = inst.traveler_count();
  const std::size_t m = inst.vehicle_count();
  for (const auto* mat : {&alloc.traveler_profit, &alloc.vehicle_profit}) {
    if (mat->traveler_count() != n || mat->vehicle_count() != m) {
      throw std::invalid_argument("profit allocation dimensions do not match the instance");
    }
  }

  FeasibilityReport report;
  const Money zero(0);
  auto cell = [](const PairMatrix<Money>& mat, std::size_t i, std::size_t j) {
    return mat.has(i, j) ? *mat.at(i, j) : Money(0);
  };
  for (std::size_t i = 0; i < n; ++i) {
    auto matched = a.vehicle_of(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.compatible(i, j)) continue;
      const Money pi = cell(alloc.traveler_profit, i, j);
      const Money rho = cell(alloc.vehicle_profit, i, j);
      if (matched == j) {
        if (pi < 0) report.add({ConstraintKind::traveler_profit_nonnegative, i, j, pi, zero});
        if (rho < 0) report.add({ConstraintKind::vehicle_profit_nonnegative, i, j, rho, zero});
        const Money share = cost_share(inst, i, j);
        const Money forced = valuation(inst, i, j) - share - inst.travelers()[i].v_min;
        if (pi + rho != forced) report.add({ConstraintKind::profit_identity, i, j, Money(pi + rho), forced});
        const Money payment = rho + share;
        report.utility_identity.push_back({i, j, pi + rho == valuation(inst, i, j) - payment - share});
      }
      if (a.occupancy(j) == 0 && rho != 0) {
        report.add({ConstraintKind::idle_vehicle_profit_zero, i, j, rho, zero});
      }
      if (!matched && pi != 0) {
        report.add({ConstraintKind::unassigned_traveler_profit_zero, i, j, pi, zero});
      }
    }
  }
  return report;
}

namespace {

// Weight of the cost share inside the traveler's deviation value.
int share_weight(StabilityRule rule) { return rule == StabilityRule::paper_literal ? 1 : 0; }

}  // namespace

CheckReport check_stability(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t,
                            StabilityRule rule) {
  validate_payments(inst, t);
  FeasibilityReport feasibility = check_feasibility(inst, a, compute_profits(inst, a, t));
  if (!feasibility.verdict) throw InfeasibleAllocationError(std::move(feasibility));

  const std::size_t n = inst.traveler_count();
  const std::size_t m = inst.vehicle_count();
  const int kappa = share_weight(rule);
  auto deviation = [&](std::size_t i, std::size_t j) {
    return Money(valuation(inst, i, j) - *t.at(i, j) - kappa * cost_share(inst, i, j));
  };
  auto margin = [&](std::size_t i, std::size_t j) {
    return Money(*t.at(i, j) - (1 - kappa) * cost_share(inst, i, j));
  };

  std::vector<Money> reservation(m, Money(0));
  for (std::size_t j = 0; j < m; ++j) {
    if (a.occupancy(j) < static_cast<std::size_t>(inst.vehicles()[j].capacity)) continue;
    bool first = true;
    for (std::size_t k : a.riders(j)) {
      Money mk = margin(k, j);
      if (first || mk < reservation[j]) reservation[j] = mk;
      first = false;
    }
  }

  CheckReport report;
  const Money zero(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto matched = a.vehicle_of(i);
    if (matched) {
      const Money own = deviation(i, *matched);
      if (own < 0) report.add({ConstraintKind::prefers_staying_home, i, matched, own, zero});
      for (std::size_t j = 0; j < m; ++j) {
        if (j == *matched || !inst.compatible(i, j)) continue;
        Money other = deviation(i, j);
        if (own < other) report.add({ConstraintKind::prefers_other_vehicle, i, j, own, other});
      }
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        if (!inst.compatible(i, j)) continue;
        Money other = deviation(i, j);
        if (other > 0) report.add({ConstraintKind::unassigned_wants_vehicle, i, j, zero, other});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.compatible(i, j) || a.is_matched(i, j)) continue;
      Money mij = margin(i, j);
      if (mij > reservation[j]) report.add({ConstraintKind::counterfactual_price, i, j, reservation[j], mij});
    }
  }
  return report;
}

StabilitySystem build_stability_system(const MarketInstance& inst, const Assignment& a, StabilityRule rule) {
  validate_assignment(inst, a);
  const std::size_t n = inst.traveler_count();
  const std::size_t m = inst.vehicle_count();
  const int kappa = share_weight(rule);

  StabilitySystem sys;
  sys.problem.sense = lp::Sense::maximize;
  std::vector<std::optional<std::size_t>> var(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.compatible(i, j)) continue;
      var[i * m + j] = sys.problem.add_variable();
      sys.pairs.push_back({i, j});
    }
  }
  auto t = [&](std::size_t i, std::size_t j) { return *var[i * m + j]; };
  auto pair_name = [&](std::size_t i, std::size_t j) {
    return inst.travelers()[i].id + "@" + inst.vehicles()[j].id;
  };
  using lp::Relation;
  auto v = [&](std::size_t i, std::size_t j) { return valuation(inst, i, j); };
  auto c = [&](std::size_t i, std::size_t j) { return cost_share(inst, i, j); };

  for (std::size_t i = 0; i < n; ++i) {
    auto matched = a.vehicle_of(i);
    if (matched) {
      const std::size_t j = *matched;
      sys.problem.add_row({{t(i, j), Money(1)}}, Relation::greater_equal, c(i, j),
                          "vehicle profit nonnegative " + pair_name(i, j));
      sys.problem.add_row({{t(i, j), Money(1)}}, Relation::less_equal,
                          Money(v(i, j) - inst.travelers()[i].v_min),
                          "traveler profit nonnegative " + pair_name(i, j));
      sys.problem.add_row({{t(i, j), Money(1)}}, Relation::less_equal, Money(v(i, j) - kappa * c(i, j)),
                          "prefers ride to staying unassigned " + pair_name(i, j));
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j || !inst.compatible(i, k)) continue;
        sys.problem.add_row({{t(i, j), Money(-1)}, {t(i, k), Money(1)}}, Relation::greater_equal,
                            Money(v(i, k) - kappa * c(i, k) - v(i, j) + kappa * c(i, j)),
                            "prefers " + pair_name(i, j) + " over " + inst.vehicles()[k].id);
      }
    } else {
      for (std::size_t k = 0; k < m; ++k) {
        if (!inst.compatible(i, k)) continue;
        sys.problem.add_row({{t(i, k), Money(1)}}, Relation::greater_equal, Money(v(i, k) - kappa * c(i, k)),
                            "unassigned stays out of " + pair_name(i, k));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.compatible(i, j) || a.is_matched(i, j)) continue;
      if (a.occupancy(j) < static_cast<std::size_t>(inst.vehicles()[j].capacity)) {
        sys.problem.add_row({{t(i, j), Money(1)}}, Relation::less_equal, Money((1 - kappa) * c(i, j)),
                            "counterfactual price acceptable " + pair_name(i, j));
        continue;
      }
      for (std::size_t k : a.riders(j)) {
        sys.problem.add_row({{t(i, j), Money(1)}, {t(k, j), Money(-1)}}, Relation::less_equal,
                            Money((1 - kappa) * (c(i, j) - c(k, j))),
                            "counterfactual price acceptable " + pair_name(i, j) + " vs " + inst.travelers()[k].id);
      }
    }
  }
  return sys;
}

namespace {

std::vector<Money> optimize_in_place(lp::Problem& problem, lp::Sense sense, std::vector<Money> objective) {
  problem.sense = sense;
  problem.objective = std::move(objective);
  auto outcome = lp::solve(problem);
  auto* opt = std::get_if<lp::Optimal>(&outcome);
  // Every canonical objective is bounded on a nonempty set.
  if (opt == nullptr) throw std::logic_error("stable payment refinement did not reach an optimum");
  return opt->point;
}

}  // namespace

SynthesisOutcome synthesize_stable_payments(const MarketInstance& inst, const Assignment& a,
                                            const SynthesisOptions& options) {
  StabilitySystem sys = build_stability_system(inst, a, options.rule);
  const std::size_t vars = sys.problem.variable_count();
  {
    auto outcome = lp::solve(sys.problem);
    if (auto* cert = std::get_if<lp::Infeasible>(&outcome)) {
      return InfeasibleStability{std::move(sys.problem), *cert};
    }
  }

  lp::Problem work = sys.problem;
  const bool traveler_side = options.point == CanonicalPoint::traveler_optimal;
  const lp::Sense sense = traveler_side ? lp::Sense::minimize : lp::Sense::maximize;
  std::vector<Money> point(vars, Money(0));
  std::vector<Money> off_match(vars, Money(0));
  bool any_off_match = false;
  for (std::size_t k = 0; k < vars; ++k) {
    auto [i, j] = sys.pairs[k];
    if (!a.is_matched(i, j)) {
      off_match[k] = 1;
      any_off_match = true;
      continue;
    }
    std::vector<Money> objective(vars, Money(0));
    objective[k] = 1;
    point = optimize_in_place(work, sense, objective);
    work.add_row({{k, Money(1)}}, lp::Relation::equal, point[k], "canonical " + inst.travelers()[i].id);
  }
  if (any_off_match || vars == 0) point = optimize_in_place(work, sense, off_match);

  StablePayments result;
  result.payments = PaymentSchedule(inst.traveler_count(), inst.vehicle_count());
  for (std::size_t k = 0; k < vars; ++k) {
    result.payments.at(sys.pairs[k].first, sys.pairs[k].second) = point[k];
  }
  result.allocation = compute_profits(inst, a, result.payments);
  return result;
}

namespace {

PairMatrix<Money> blend(const PairMatrix<Money>& x, const PairMatrix<Money>& y, const Money& w) {
  if (x.traveler_count() != y.traveler_count() || x.vehicle_count() != y.vehicle_count()) {
    throw std::invalid_argument("cannot blend matrices of different shapes");
  }
  PairMatrix<Money> out(x.traveler_count(), x.vehicle_count());
  for (std::size_t i = 0; i < x.traveler_count(); ++i) {
    for (std::size_t j = 0; j < x.vehicle_count(); ++j) {
      if (x.has(i, j) != y.has(i, j)) throw std::invalid_argument("cannot blend matrices with different support");
      if (x.has(i, j)) out.at(i, j) = Money(w * *x.at(i, j) + (1 - w) * *y.at(i, j));
    }
  }
  return out;
}

}  // namespace

StablePayments blend_allocations(const StablePayments& first, const StablePayments& second, const Money& weight) {
  if (weight < 0 || weight > 1) throw std::invalid_argument("blend weight must lie in [0, 1]");
  return StablePayments{
      blend(first.payments, second.payments, weight),
      ProfitAllocation{blend(first.allocation.traveler_profit, second.allocation.traveler_profit, weight),
                       blend(first.allocation.vehicle_profit, second.allocation.vehicle_profit, weight)},
  };
}

}  // namespace mobmarket
