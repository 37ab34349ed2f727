#pragma once

#include "mobmarket/lp.hpp"
#include "mobmarket/market.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mobmarket {

/// Net profits of each side on matched pairs. Cells of compatible pairs that
/// are not matched hold zero.
struct ProfitAllocation {
  PairMatrix<Money> traveler_profit;  ///< valuation - payment - v_min
  PairMatrix<Money> vehicle_profit;   ///< payment - cost share

  friend bool operator==(const ProfitAllocation&, const ProfitAllocation&) = default;
};

/// Which inequality a traveler uses to compare its ride against a deviation.
enum class StabilityRule {
  /// Assignment-game core: a traveler weighs valuation - payment; a pair
  /// blocks when it can split more than the traveler's utility plus the
  /// vehicle's reservation margin.
  classic_core,
  /// The literal per-traveler inequality in which the cost share is
  /// subtracted from utility: valuation - payment - cost share.
  paper_literal,
};

const char* to_string(StabilityRule rule);

enum class ConstraintKind {
  traveler_profit_nonnegative,
  vehicle_profit_nonnegative,
  profit_identity,            ///< traveler + vehicle profit = valuation - cost share - v_min
  idle_vehicle_profit_zero,
  unassigned_traveler_profit_zero,
  prefers_other_vehicle,      ///< matched traveler would rather ride another vehicle
  prefers_staying_home,       ///< matched traveler would rather be unassigned
  unassigned_wants_vehicle,   ///< unassigned traveler would rather ride a vehicle
  counterfactual_price,       ///< off-match payment the vehicle would not accept
};

const char* to_string(ConstraintKind kind);

struct Violation {
  ConstraintKind kind;
  std::size_t traveler;
  std::optional<std::size_t> vehicle;
  Money lhs;  ///< the side that should be >= (or ==) ...
  Money rhs;  ///< ... this side
};

struct CheckReport {
  bool verdict = true;
  std::vector<Violation> violations;

  void add(Violation v) {
    verdict = false;
    violations.push_back(std::move(v));
  }
};

/// Whether the pair-sum also equals utility minus cost share, per matched
/// pair. Reported only; it holds exactly when payment == v_min.
struct UtilityIdentityStatus {
  std::size_t traveler;
  std::size_t vehicle;
  bool holds;
};

struct FeasibilityReport : CheckReport {
  std::vector<UtilityIdentityStatus> utility_identity;
};

/// Profits for matched pairs; zero everywhere else.
/// Throws ValidationError if a matched pair has no payment.
ProfitAllocation compute_profits(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t);

FeasibilityReport check_feasibility(const MarketInstance& inst, const Assignment& a,
                                    const ProfitAllocation& alloc);

/// Thrown by check_stability when the allocation is not feasible.
class InfeasibleAllocationError : public std::runtime_error {
 public:
  explicit InfeasibleAllocationError(FeasibilityReport report)
      : std::runtime_error("allocation is not feasible; stability is undefined"), report_(std::move(report)) {}
  const FeasibilityReport& report() const noexcept { return report_; }

 private:
  FeasibilityReport report_;
};

/// Stability of the payment schedule under `a`.
///
/// For a traveler i and a compatible vehicle j the deviation value is
///   g(i, j) = valuation - payment            (classic_core)
///   g(i, j) = valuation - payment - share    (paper_literal)
/// and the vehicle keeps the rest of the pair surplus as its margin,
/// m(i, j) = (valuation - share) - g(i, j).
/// Every failure below is recorded:
///   - matched i at j: g(i, j) >= 0 and g(i, j) >= g(i, j') for each other j';
///   - unassigned i: 0 >= g(i, j') for each compatible j';
///   - every off-match payment is one the vehicle would accept: m(i, j') is
///     at most the vehicle's reservation margin, which is the least margin
///     among its riders when it is full and zero when a seat is free.
/// The last rule stops the inequalities being met by quoting prohibitive
/// counterfactual prices.
///
/// Throws InfeasibleAllocationError if compute_profits(inst, a, t) fails
/// check_feasibility, ValidationError if the schedule is incomplete.
CheckReport check_stability(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t,
                            StabilityRule rule = StabilityRule::classic_core);

/// Where inside the stable set the synthesizer lands.
enum class CanonicalPoint {
  /// Maximize matched travelers' profits lexicographically in traveler
  /// order, then minimize the sum of off-match payments.
  traveler_optimal,
  /// Maximize matched payments lexicographically, then the off-match sum.
  vehicle_optimal,
};

struct StablePayments {
  PaymentSchedule payments;
  ProfitAllocation allocation;
};

struct InfeasibleStability {
  lp::Problem system;          ///< the feasibility system over payments
  lp::Infeasible certificate;  ///< proves `system` has no solution
};

using SynthesisOutcome = std::variant<StablePayments, InfeasibleStability>;

struct SynthesisOptions {
  StabilityRule rule = StabilityRule::classic_core;
  CanonicalPoint point = CanonicalPoint::traveler_optimal;
};

/// Linear system over one payment variable per compatible pair whose
/// solutions are exactly the schedules passing both checkers under `a`.
/// Variable k prices `pairs[k]`.
struct StabilitySystem {
  lp::Problem problem;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

StabilitySystem build_stability_system(const MarketInstance& inst, const Assignment& a, StabilityRule rule);

/// Finds a payment schedule making `a` feasible and stable, or proves none exists.
SynthesisOutcome synthesize_stable_payments(const MarketInstance& inst, const Assignment& a,
                                            const SynthesisOptions& options = {});

/// Entrywise weight * first + (1 - weight) * second.
/// Throws std::invalid_argument on shape mismatch or weight outside [0, 1].
StablePayments blend_allocations(const StablePayments& first, const StablePayments& second, const Money& weight);

}  // namespace mobmarket
