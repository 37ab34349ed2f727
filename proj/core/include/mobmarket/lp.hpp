#pragma once

#include "mobmarket/money.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mobmarket::lp {

enum class Relation { less_equal, equal, greater_equal };
enum class Sense { maximize, minimize };

struct Row {
  std::vector<Money> coefficients;  ///< dense, one per variable
  Relation relation = Relation::less_equal;
  Money rhs;
  std::string label;  ///< free-form tag carried into reports
};

/// A missing bound is infinite. The default is x >= 0.
struct Bounds {
  std::optional<Money> lower = Money(0);
  std::optional<Money> upper;
};

class Problem {
 public:
  Sense sense = Sense::maximize;
  std::vector<Money> objective;
  std::vector<Row> rows;
  std::vector<Bounds> bounds;

  std::size_t variable_count() const noexcept { return objective.size(); }

  /// Appends a variable with zero objective and returns its index.
  std::size_t add_variable(Bounds b = {}, Money cost = 0);
  /// Appends a row given as sparse (variable, coefficient) terms.
  void add_row(std::span<const std::pair<std::size_t, Money>> terms, Relation rel, Money rhs,
               std::string label = {});
  void add_row(std::initializer_list<std::pair<std::size_t, Money>> terms, Relation rel, Money rhs,
               std::string label = {});
};

struct Optimal {
  std::vector<Money> point;
  Money value;
};

/// Row multipliers y with y_r >= 0 on <= rows, y_r <= 0 on >= rows, free on
/// = rows, such that min over the variable box of (y^T A) x exceeds y^T b.
struct Infeasible {
  std::vector<Money> multipliers;
};

/// A feasible point and a direction along which the objective grows without bound.
struct Unbounded {
  std::vector<Money> point;
  std::vector<Money> ray;
};

using Outcome = std::variant<Optimal, Infeasible, Unbounded>;

struct SolveStats {
  std::size_t pivots = 0;
};

/// Exact two-phase primal simplex over rationals with Bland's rule.
Outcome solve(const Problem& problem, SolveStats* stats = nullptr);

/// True iff `x` satisfies every row and bound exactly.
bool is_feasible(const Problem& problem, std::span<const Money> x);

/// True iff the certificate proves the system infeasible.
bool verify_certificate(const Problem& problem, const Infeasible& certificate);

/// True iff `ray` keeps feasibility from any feasible point and improves the objective.
bool verify_ray(const Problem& problem, const Unbounded& unbounded);

Money evaluate(const Problem& problem, std::span<const Money> x);

}  // namespace mobmarket::lp
