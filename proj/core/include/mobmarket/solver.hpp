#pragma once

#include "mobmarket/lp.hpp"
#include "mobmarket/market.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mobmarket {

/// Prices proving optimality of a capacitated matching: every traveler
/// price and vehicle price is nonnegative, their sum covers every
/// compatible pair's weight, and sum(traveler) + sum(capacity * vehicle)
/// equals the objective.
struct DualCertificate {
  std::vector<Money> traveler_price;
  std::vector<Money> vehicle_price;

  friend bool operator==(const DualCertificate&, const DualCertificate&) = default;
};

struct SolveStats {
  std::size_t augmentations = 0;
  std::size_t path_searches = 0;
  std::size_t lp_pivots = 0;  ///< nonzero only when the LP cross-check ran
  std::optional<bool> lp_agrees;
};

struct SolveResult {
  Assignment assignment;
  Money objective;
  std::optional<DualCertificate> dual_certificate;
  SolveStats stats;
};

/// What the solver maximizes.
enum class Objective {
  surplus,  ///< sum of (valuation - cost share) over matched pairs
  paper,    ///< sum of (valuation - payment) over matched pairs, payments fixed
};

const char* to_string(Objective objective);
std::optional<Objective> parse_objective(std::string_view text);

struct SolveOptions {
  Objective objective = Objective::surplus;
  /// Also solve the LP relaxation and record whether it agrees.
  bool lp_cross_check = false;
};

/// Maximum-weight capacitated bipartite matching by successive shortest
/// augmenting paths with vertex potentials. Only cells with positive weight
/// are eligible, so the result never contains a pair that lowers the total.
/// Deterministic: searches scan travelers and vehicles in index order.
SolveResult solve_weighted_b_matching(const PairMatrix<Money>& weights, std::span<const int> capacities);

/// Optimal assignment for the surplus objective.
SolveResult solve_optimal_assignment(const MarketInstance& inst, const SolveOptions& options = {});

/// Optimal assignment for the selected objective; `payments` is required
/// (and must be complete) when options.objective == Objective::paper.
SolveResult solve_optimal_assignment(const MarketInstance& inst, const PaymentSchedule& payments,
                                     const SolveOptions& options);

/// Per-pair weights the solver maximizes under `objective`.
PairMatrix<Money> objective_weights(const MarketInstance& inst, Objective objective,
                                    const PaymentSchedule* payments = nullptr);

/// Sum of `weights` over matched pairs.
Money matched_weight(const PairMatrix<Money>& weights, const Assignment& a);

/// Checks dual feasibility and strong duality for `a` exactly.
bool verify_dual_certificate(const PairMatrix<Money>& weights, std::span<const int> capacities,
                             const Assignment& a, const Money& objective, const DualCertificate& dual);

/// Builds a certificate for an assignment already known to be optimal,
/// from the difference constraints implied by complementary slackness.
/// Returns nullopt if the assignment is not optimal.
std::optional<DualCertificate> dual_certificate_for(const PairMatrix<Money>& weights,
                                                    std::span<const int> capacities, const Assignment& a);

std::vector<int> capacities(const MarketInstance& inst);

// ---------------------------------------------------------------------------
// LP relaxation

struct LpRelaxation {
  lp::Problem problem;
  /// (traveler, vehicle) for each LP variable.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Relaxation of the assignment problem: one variable in [0, 1] per
/// compatible pair, traveler rows <= 1 and vehicle rows <= capacity.
LpRelaxation build_lp_relaxation(const MarketInstance& inst, const PairMatrix<Money>& weights);

struct LpRelaxationResult {
  Money objective;
  std::vector<Money> point;
  bool integral = false;
  /// Present when the optimal vertex is integral.
  std::optional<Assignment> assignment;
  std::size_t pivots = 0;
};

LpRelaxationResult solve_lp_relaxation(const MarketInstance& inst,
                                       const PairMatrix<Money>& weights);

// ---------------------------------------------------------------------------
// Exhaustive oracle

class OracleScaleExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::size_t max_travelers = 10;
  double max_maps = 1e7;  ///< bound on (vehicles + 1)^travelers
};

/// Throws OracleScaleExceeded if the instance is too large to enumerate.
void check_oracle_scale(const MarketInstance& inst, const OracleLimits& limits = {});

/// Calls `visit` once for every assignment satisfying compatibility and
/// capacity, in lexicographic order (unassigned first, then vehicles by index).
void for_each_assignment(const MarketInstance& inst, const std::function<void(const Assignment&)>& visit,
                         const OracleLimits& limits = {});

std::vector<Assignment> enumerate_assignments(const MarketInstance& inst, const OracleLimits& limits = {});

struct OracleResult {
  Money objective;
  std::vector<Assignment> optimal;  ///< complete argmax set, lexicographic order
};

/// Exact maximum of the matched weight over every valid assignment.
OracleResult oracle_optimum(const MarketInstance& inst, const PairMatrix<Money>& weights,
                            const OracleLimits& limits = {});
OracleResult oracle_optimum(const MarketInstance& inst, const OracleLimits& limits = {});

}  // namespace mobmarket
