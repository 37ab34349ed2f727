#include "mobmarket/lp.hpp"

#include <stdexcept>
#include <utility>

namespace mobmarket::lp {

std::size_t Problem::add_variable(Bounds b, Money cost) {
  objective.push_back(std::move(cost));
  bounds.push_back(std::move(b));
  for (auto& row : rows) row.coefficients.emplace_back(0);
  return objective.size() - 1;
}

void Problem::add_row(std::span<const std::pair<std::size_t, Money>> terms, Relation rel, Money rhs,
                      std::string label) {
  Row row;
  row.coefficients.assign(variable_count(), Money(0));
  for (const auto& [var, coef] : terms) {
    if (var >= variable_count()) throw std::out_of_range("lp row references unknown variable");
    row.coefficients[var] += coef;
  }
  row.relation = rel;
  row.rhs = std::move(rhs);
  row.label = std::move(label);
  rows.push_back(std::move(row));
}

void Problem::add_row(std::initializer_list<std::pair<std::size_t, Money>> terms, Relation rel, Money rhs,
                      std::string label) {
  std::vector<std::pair<std::size_t, Money>> v(terms);
  add_row(std::span<const std::pair<std::size_t, Money>>(v), rel, std::move(rhs), std::move(label));
}

Money evaluate(const Problem& problem, std::span<const Money> x) {
  Money total = 0;
  for (std::size_t k = 0; k < problem.variable_count(); ++k) total += problem.objective[k] * x[k];
  return total;
}

namespace {

bool satisfies(const Money& lhs, Relation rel, const Money& rhs) {
  switch (rel) {
    case Relation::less_equal: return lhs <= rhs;
    case Relation::equal: return lhs == rhs;
    case Relation::greater_equal: return lhs >= rhs;
  }
  return false;
}

Relation flipped(Relation rel) {
  switch (rel) {
    case Relation::less_equal: return Relation::greater_equal;
    case Relation::greater_equal: return Relation::less_equal;
    case Relation::equal: return Relation::equal;
  }
  return rel;
}

// Original variable k = offset + sum(sign * standard column), columns >= 0.
struct VariableMap {
  Money offset;
  std::vector<std::pair<std::size_t, int>> columns;
};

struct StandardRow {
  std::vector<Money> coefficients;
  Relation relation;
  Money rhs;
  int sign = 1;                  // +1 or -1 applied to make rhs >= 0
  std::optional<std::size_t> source;  // original row index; empty for bound rows
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cells_(rows, std::vector<Money>(cols)), rhs_(rows), basis_(rows), reduced_(cols) {}

  std::vector<std::vector<Money>> cells_;
  std::vector<Money> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Money> reduced_;  // z_c - c_c for the active cost vector
  Money value_;                 // c_B . rhs
  std::size_t pivots_ = 0;

  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return reduced_.size(); }

  void price(const std::vector<Money>& cost) {
    for (std::size_t c = 0; c < cols(); ++c) {
      Money z = 0;
      for (std::size_t r = 0; r < rows(); ++r) {
        if (cost[basis_[r]] != 0 && cells_[r][c] != 0) z += cost[basis_[r]] * cells_[r][c];
      }
      reduced_[c] = z - cost[c];
    }
    value_ = 0;
    for (std::size_t r = 0; r < rows(); ++r) value_ += cost[basis_[r]] * rhs_[r];
  }

  void pivot(std::size_t pr, std::size_t pc) {
    ++pivots_;
    const Money inv = 1 / cells_[pr][pc];
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < cols(); ++c) {
      if (cells_[pr][c] != 0) {
        cells_[pr][c] *= inv;
        nz.push_back(c);
      }
    }
    rhs_[pr] *= inv;
    auto eliminate = [&](std::vector<Money>& row, Money& rhs) {
      const Money f = row[pc];
      if (f == 0) return;
      for (std::size_t c : nz) row[c] -= f * cells_[pr][c];
      rhs -= f * rhs_[pr];
    };
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r != pr) eliminate(cells_[r], rhs_[r]);
    }
    eliminate(reduced_, value_);
    basis_[pr] = pc;
  }

  // Bland's rule: lowest eligible entering column, lowest basic index on ties.
  // Returns false at optimality; sets `unbounded_col` if a ray was found.
  bool step(const std::vector<bool>& may_enter, std::optional<std::size_t>& unbounded_col) {
    std::optional<std::size_t> enter;
    for (std::size_t c = 0; c < cols(); ++c) {
      if (may_enter[c] && reduced_[c] < 0) {
        enter = c;
        break;
      }
    }
    if (!enter) return false;
    std::optional<std::size_t> leave;
    Money best;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (cells_[r][*enter] <= 0) continue;
      Money ratio = rhs_[r] / cells_[r][*enter];
      if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (!leave) {
      unbounded_col = enter;
      return false;
    }
    pivot(*leave, *enter);
    return true;
  }
};

}  // namespace

Outcome solve(const Problem& problem, SolveStats* stats) {
  const std::size_t n = problem.variable_count();
  if (problem.bounds.size() != n) throw std::invalid_argument("lp bounds size mismatch");
  for (const auto& row : problem.rows) {
    if (row.coefficients.size() != n) throw std::invalid_argument("lp row width mismatch");
  }

  // Shift, reflect or split each variable so every standard column is >= 0.
  std::vector<VariableMap> vars(n);
  std::size_t ncols = 0;
  std::vector<StandardRow> srows;
  std::vector<std::pair<std::size_t, Money>> bound_rows;  // (column, upper - lower)
  for (std::size_t k = 0; k < n; ++k) {
    const auto& b = problem.bounds[k];
    if (b.lower) {
      vars[k].offset = *b.lower;
      vars[k].columns.push_back({ncols, 1});
      if (b.upper) bound_rows.push_back({ncols, Money(*b.upper - *b.lower)});
      ++ncols;
    } else if (b.upper) {
      vars[k].offset = *b.upper;
      vars[k].columns.push_back({ncols++, -1});
    } else {
      vars[k].offset = 0;
      vars[k].columns.push_back({ncols++, 1});
      vars[k].columns.push_back({ncols++, -1});
    }
  }

  for (std::size_t r = 0; r < problem.rows.size(); ++r) {
    const Row& row = problem.rows[r];
    StandardRow s{std::vector<Money>(ncols), row.relation, row.rhs, 1, r};
    for (std::size_t k = 0; k < n; ++k) {
      const Money& a = row.coefficients[k];
      if (a == 0) continue;
      s.rhs -= a * vars[k].offset;
      for (auto [col, sign] : vars[k].columns) s.coefficients[col] += sign * a;
    }
    srows.push_back(std::move(s));
  }
  for (auto& [col, width] : bound_rows) {
    StandardRow s{std::vector<Money>(ncols), Relation::less_equal, width, 1, std::nullopt};
    s.coefficients[col] = 1;
    srows.push_back(std::move(s));
  }
  for (auto& s : srows) {
    if (s.rhs < 0) {
      s.sign = -1;
      s.rhs = -s.rhs;
      for (auto& a : s.coefficients) a = -a;
      s.relation = flipped(s.relation);
    }
  }

  // Columns: standard | one slack or surplus per inequality row | artificials.
  const std::size_t m = srows.size();
  std::vector<std::size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX), init_col(m);
  std::size_t total = ncols;
  for (std::size_t r = 0; r < m; ++r) {
    if (srows[r].relation != Relation::equal) slack_col[r] = total++;
  }
  const std::size_t first_art = total;
  for (std::size_t r = 0; r < m; ++r) {
    if (srows[r].relation != Relation::less_equal) art_col[r] = total++;
  }

  Tableau tab(m, total);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < ncols; ++c) tab.cells_[r][c] = srows[r].coefficients[c];
    tab.rhs_[r] = srows[r].rhs;
    if (srows[r].relation == Relation::less_equal) {
      tab.cells_[r][slack_col[r]] = 1;
      tab.basis_[r] = init_col[r] = slack_col[r];
    } else {
      if (srows[r].relation == Relation::greater_equal) tab.cells_[r][slack_col[r]] = -1;
      tab.cells_[r][art_col[r]] = 1;
      tab.basis_[r] = init_col[r] = art_col[r];
    }
  }

  auto finish_stats = [&] {
    if (stats) stats->pivots = tab.pivots_;
  };

  // Phase 1: maximize -sum(artificials).
  std::vector<Money> phase1_cost(total, Money(0));
  for (std::size_t c = first_art; c < total; ++c) phase1_cost[c] = -1;
  std::vector<bool> may_enter(total, true);
  if (first_art < total) {
    tab.price(phase1_cost);
    std::optional<std::size_t> ray_col;
    while (tab.step(may_enter, ray_col)) {
    }
    if (tab.value_ < 0) {
      Infeasible cert{std::vector<Money>(problem.rows.size())};
      for (std::size_t r = 0; r < m; ++r) {
        if (!srows[r].source) continue;
        Money y = tab.reduced_[init_col[r]] + phase1_cost[init_col[r]];
        cert.multipliers[*srows[r].source] = srows[r].sign * y;
      }
      finish_stats();
      return cert;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis_[r] < first_art) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (tab.cells_[r][c] != 0) {
          tab.pivot(r, c);
          break;
        }
      }
    }
    for (std::size_t c = first_art; c < total; ++c) may_enter[c] = false;
  }

  // Phase 2 always maximizes; minimization negates the cost.
  std::vector<Money> cost(total, Money(0));
  const int direction = problem.sense == Sense::maximize ? 1 : -1;
  for (std::size_t k = 0; k < n; ++k) {
    for (auto [col, sign] : vars[k].columns) cost[col] += direction * sign * problem.objective[k];
  }
  tab.price(cost);
  std::optional<std::size_t> ray_col;
  while (tab.step(may_enter, ray_col)) {
  }

  std::vector<Money> xs(total, Money(0));
  for (std::size_t r = 0; r < m; ++r) xs[tab.basis_[r]] = tab.rhs_[r];
  auto to_original = [&](const std::vector<Money>& standard, bool with_offset) {
    std::vector<Money> x(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = with_offset ? vars[k].offset : Money(0);
      for (auto [col, sign] : vars[k].columns) x[k] += sign * standard[col];
    }
    return x;
  };

  finish_stats();
  if (ray_col) {
    std::vector<Money> d(total, Money(0));
    d[*ray_col] = 1;
    for (std::size_t r = 0; r < m; ++r) d[tab.basis_[r]] -= tab.cells_[r][*ray_col];
    return Unbounded{to_original(xs, true), to_original(d, false)};
  }
  Optimal opt{to_original(xs, true), Money(0)};
  opt.value = evaluate(problem, opt.point);
  return opt;
}

bool is_feasible(const Problem& problem, std::span<const Money> x) {
  if (x.size() != problem.variable_count()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& b = problem.bounds[k];
    if (b.lower && x[k] < *b.lower) return false;
    if (b.upper && x[k] > *b.upper) return false;
  }
  for (const auto& row : problem.rows) {
    Money lhs = 0;
    for (std::size_t k = 0; k < x.size(); ++k) lhs += row.coefficients[k] * x[k];
    if (!satisfies(lhs, row.relation, row.rhs)) return false;
  }
  return true;
}

bool verify_certificate(const Problem& problem, const Infeasible& certificate) {
  const auto& y = certificate.multipliers;
  if (y.size() != problem.rows.size()) return false;
  const std::size_t n = problem.variable_count();
  std::vector<Money> combined(n, Money(0));
  Money rhs = 0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    const Row& row = problem.rows[r];
    if (row.relation == Relation::less_equal && y[r] < 0) return false;
    if (row.relation == Relation::greater_equal && y[r] > 0) return false;
    if (y[r] == 0) continue;
    for (std::size_t k = 0; k < n; ++k) combined[k] += y[r] * row.coefficients[k];
    rhs += y[r] * row.rhs;
  }
  for (const auto& b : problem.bounds) {
    if (b.lower && b.upper && *b.lower > *b.upper) return true;  // empty box
  }
  Money box_min = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& b = problem.bounds[k];
    if (combined[k] > 0) {
      if (!b.lower) return false;
      box_min += combined[k] * *b.lower;
    } else if (combined[k] < 0) {
      if (!b.upper) return false;
      box_min += combined[k] * *b.upper;
    }
  }
  return box_min > rhs;
}

bool verify_ray(const Problem& problem, const Unbounded& unbounded) {
  const auto& d = unbounded.ray;
  if (d.size() != problem.variable_count() || !is_feasible(problem, unbounded.point)) return false;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& b = problem.bounds[k];
    if (b.lower && d[k] < 0) return false;
    if (b.upper && d[k] > 0) return false;
  }
  for (const auto& row : problem.rows) {
    Money lhs = 0;
    for (std::size_t k = 0; k < d.size(); ++k) lhs += row.coefficients[k] * d[k];
    if (!satisfies(lhs, row.relation, Money(0))) return false;
  }
  Money gain = evaluate(problem, d);
  return problem.sense == Sense::maximize ? gain > 0 : gain < 0;
}

}  // namespace mobmarket::lp
