#include "mobmarket/solver.hpp"

#include "mobmarket/errors.hpp"

#include <algorithm>
#include <queue>
#include <utility>

namespace mobmarket {

const char* to_string(Objective objective) {
  return objective == Objective::surplus ? "surplus" : "paper";
}

std::optional<Objective> parse_objective(std::string_view text) {
  if (text == "surplus") return Objective::surplus;
  if (text == "paper") return Objective::paper;
  return std::nullopt;
}

std::vector<int> capacities(const MarketInstance& inst) {
  std::vector<int> caps;
  caps.reserve(inst.vehicle_count());
  for (const auto& v : inst.vehicles()) caps.push_back(v.capacity);
  return caps;
}

PairMatrix<Money> objective_weights(const MarketInstance& inst, Objective objective,
                                    const PaymentSchedule* payments) {
  if (objective == Objective::surplus) return surplus_matrix(inst);
  if (payments == nullptr) {
    throw ValidationError("payments", "", "objective 'paper' needs a payment schedule");
  }
  validate_payments(inst, *payments);
  PairMatrix<Money> w(inst.traveler_count(), inst.vehicle_count());
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      if (inst.compatible(i, j)) w.at(i, j) = Money(valuation(inst, i, j) - *payments->at(i, j));
    }
  }
  return w;
}

Money matched_weight(const PairMatrix<Money>& weights, const Assignment& a) {
  Money total = 0;
  for (std::size_t i = 0; i < a.traveler_count(); ++i) {
    if (auto j = a.vehicle_of(i)) total += *weights.at(i, *j);
  }
  return total;
}

namespace {

struct Arc {
  std::size_t to;
  int capacity;
  Money cost;
  std::size_t reverse;
};

class FlowGraph {
 public:
  explicit FlowGraph(std::size_t nodes) : adjacency_(nodes) {}

  std::size_t add_arc(std::size_t from, std::size_t to, int capacity, const Money& cost) {
    adjacency_[from].push_back({to, capacity, cost, adjacency_[to].size()});
    adjacency_[to].push_back({from, 0, Money(-cost), adjacency_[from].size() - 1});
    return adjacency_[from].size() - 1;
  }

  std::vector<std::vector<Arc>> adjacency_;
};

}  // namespace

SolveResult solve_weighted_b_matching(const PairMatrix<Money>& weights, std::span<const int> caps) {
  const std::size_t n = weights.traveler_count();
  const std::size_t m = weights.vehicle_count();
  if (caps.size() != m) throw std::invalid_argument("capacity vector does not match vehicle count");

  const std::size_t source = 0;
  const std::size_t sink = n + m + 1;
  auto traveler_node = [](std::size_t i) { return 1 + i; };
  auto vehicle_node = [n](std::size_t j) { return 1 + n + j; };

  FlowGraph g(n + m + 2);
  for (std::size_t i = 0; i < n; ++i) g.add_arc(source, traveler_node(i), 1, Money(0));
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pair_arcs(n);  // (vehicle, arc index)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& w = weights.at(i, j);
      if (w && *w > 0) pair_arcs[i].push_back({j, g.add_arc(traveler_node(i), vehicle_node(j), 1, Money(-*w))});
    }
  }
  for (std::size_t j = 0; j < m; ++j) g.add_arc(vehicle_node(j), sink, caps[j], Money(0));

  // Initial potentials: exact shortest distances in the layered start graph.
  std::vector<Money> potential(n + m + 2, Money(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& arc : g.adjacency_[traveler_node(i)]) {
      if (arc.capacity > 0 && arc.cost < potential[arc.to]) potential[arc.to] = arc.cost;
    }
  }
  for (std::size_t j = 0; j < m; ++j) potential[sink] = std::min(potential[sink], potential[vehicle_node(j)]);

  SolveResult result;
  const std::size_t nodes = n + m + 2;
  for (;;) {
    ++result.stats.path_searches;
    std::vector<std::optional<Money>> dist(nodes);
    std::vector<std::pair<std::size_t, std::size_t>> parent(nodes, {SIZE_MAX, SIZE_MAX});
    std::vector<bool> done(nodes, false);
    using Entry = std::pair<Money, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[source] = Money(0);
    queue.push({Money(0), source});
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (done[u]) continue;
      done[u] = true;
      for (std::size_t k = 0; k < g.adjacency_[u].size(); ++k) {
        const Arc& arc = g.adjacency_[u][k];
        if (arc.capacity <= 0) continue;
        Money nd = d + arc.cost + potential[u] - potential[arc.to];
        if (!dist[arc.to] || nd < *dist[arc.to]) {
          dist[arc.to] = nd;
          parent[arc.to] = {u, k};
          queue.push({nd, arc.to});
        }
      }
    }
    if (!dist[sink]) break;

    Money reach = 0;
    for (const auto& d : dist) {
      if (d && *d > reach) reach = *d;
    }
    for (std::size_t v = 0; v < nodes; ++v) potential[v] += dist[v] ? *dist[v] : reach;
    // potential[sink] - potential[source] is now the true cost of the path.
    if (potential[sink] - potential[source] >= 0) break;

    for (std::size_t v = sink; v != source;) {
      auto [u, k] = parent[v];
      Arc& arc = g.adjacency_[u][k];
      arc.capacity -= 1;
      g.adjacency_[v][arc.reverse].capacity += 1;
      v = u;
    }
    ++result.stats.augmentations;
  }

  result.assignment = Assignment(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto [j, k] : pair_arcs[i]) {
      if (g.adjacency_[traveler_node(i)][k].capacity == 0) result.assignment.assign(i, j);
    }
  }
  result.objective = matched_weight(weights, result.assignment);
  result.dual_certificate = dual_certificate_for(weights, caps, result.assignment);
  return result;
}

std::optional<DualCertificate> dual_certificate_for(const PairMatrix<Money>& weights,
                                                    std::span<const int> caps, const Assignment& a) {
  // Difference constraints x_v - x_u <= w over nodes {0, y_i, -z_j}; the
  // shortest-path distances from node 0 are a solution iff no negative cycle.
  const std::size_t n = weights.traveler_count();
  const std::size_t m = weights.vehicle_count();
  const std::size_t zero = 0;
  auto y = [](std::size_t i) { return 1 + i; };
  auto z = [n](std::size_t j) { return 1 + n + j; };
  struct Constraint {
    std::size_t from, to;
    Money weight;
  };
  std::vector<Constraint> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({y(i), zero, Money(0)});
    if (!a.vehicle_of(i)) edges.push_back({zero, y(i), Money(0)});
  }
  for (std::size_t j = 0; j < m; ++j) {
    edges.push_back({zero, z(j), Money(0)});
    if (a.occupancy(j) < static_cast<std::size_t>(caps[j])) edges.push_back({z(j), zero, Money(0)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& w = weights.at(i, j);
      if (!w) continue;
      edges.push_back({y(i), z(j), Money(-*w)});
      if (a.is_matched(i, j)) edges.push_back({z(j), y(i), *w});
    }
  }

  const std::size_t nodes = n + m + 1;
  std::vector<std::optional<Money>> dist(nodes);
  dist[zero] = Money(0);
  bool changed = true;
  for (std::size_t round = 0; round <= nodes && changed; ++round) {
    changed = false;
    for (const auto& e : edges) {
      if (!dist[e.from]) continue;
      Money nd = *dist[e.from] + e.weight;
      if (!dist[e.to] || nd < *dist[e.to]) {
        dist[e.to] = nd;
        changed = true;
      }
    }
    if (changed && round == nodes) return std::nullopt;  // negative cycle: not optimal
  }
  if (changed || *dist[zero] != 0) return std::nullopt;

  DualCertificate cert;
  for (std::size_t i = 0; i < n; ++i) cert.traveler_price.push_back(dist[y(i)].value_or(Money(0)));
  for (std::size_t j = 0; j < m; ++j) cert.vehicle_price.push_back(-dist[z(j)].value_or(Money(0)));
  return cert;
}

bool verify_dual_certificate(const PairMatrix<Money>& weights, std::span<const int> caps,
                             const Assignment& a, const Money& objective, const DualCertificate& dual) {
  const std::size_t n = weights.traveler_count();
  const std::size_t m = weights.vehicle_count();
  if (dual.traveler_price.size() != n || dual.vehicle_price.size() != m || caps.size() != m) return false;
  if (matched_weight(weights, a) != objective) return false;
  for (const auto& p : dual.traveler_price) {
    if (p < 0) return false;
  }
  for (const auto& p : dual.vehicle_price) {
    if (p < 0) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& w = weights.at(i, j);
      if (w && dual.traveler_price[i] + dual.vehicle_price[j] < *w) return false;
    }
  }
  Money bound = 0;
  for (const auto& p : dual.traveler_price) bound += p;
  for (std::size_t j = 0; j < m; ++j) bound += caps[j] * dual.vehicle_price[j];
  return bound == objective;
}

LpRelaxation build_lp_relaxation(const MarketInstance& inst, const PairMatrix<Money>& weights) {
  LpRelaxation out;
  out.problem.sense = lp::Sense::maximize;
  std::vector<std::vector<std::size_t>> by_traveler(inst.traveler_count());
  std::vector<std::vector<std::size_t>> by_vehicle(inst.vehicle_count());
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      if (!weights.has(i, j)) continue;
      std::size_t var = out.problem.add_variable({Money(0), Money(1)}, *weights.at(i, j));
      out.pairs.push_back({i, j});
      by_traveler[i].push_back(var);
      by_vehicle[j].push_back(var);
    }
  }
  auto add_sum_row = [&](const std::vector<std::size_t>& vars, Money rhs, std::string label) {
    if (vars.empty()) return;
    std::vector<std::pair<std::size_t, Money>> terms;
    for (auto v : vars) terms.push_back({v, Money(1)});
    out.problem.add_row(terms, lp::Relation::less_equal, std::move(rhs), std::move(label));
  };
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    add_sum_row(by_traveler[i], Money(1), "one vehicle per traveler " + inst.travelers()[i].id);
  }
  for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
    add_sum_row(by_vehicle[j], Money(inst.vehicles()[j].capacity), "capacity " + inst.vehicles()[j].id);
  }
  return out;
}

LpRelaxationResult solve_lp_relaxation(const MarketInstance& inst, const PairMatrix<Money>& weights) {
  LpRelaxation relax = build_lp_relaxation(inst, weights);
  lp::SolveStats stats;
  auto outcome = lp::solve(relax.problem, &stats);
  // The relaxation is bounded and contains x = 0, so only the optimal case is reachable.
  auto* opt = std::get_if<lp::Optimal>(&outcome);
  if (opt == nullptr) throw std::logic_error("assignment relaxation did not reach an optimum");
  LpRelaxationResult result;
  result.objective = opt->value;
  result.point = opt->point;
  result.pivots = stats.pivots;
  result.integral = std::all_of(opt->point.begin(), opt->point.end(),
                                [](const Money& x) { return x == 0 || x == 1; });
  if (result.integral) {
    Assignment a(inst.traveler_count());
    for (std::size_t k = 0; k < relax.pairs.size(); ++k) {
      if (opt->point[k] == 1) a.assign(relax.pairs[k].first, relax.pairs[k].second);
    }
    result.assignment = a;
  }
  return result;
}

SolveResult solve_optimal_assignment(const MarketInstance& inst, const SolveOptions& options) {
  if (options.objective != Objective::surplus) {
    throw ValidationError("payments", "", "objective 'paper' needs a payment schedule");
  }
  return solve_optimal_assignment(inst, PaymentSchedule(inst.traveler_count(), inst.vehicle_count()), options);
}

SolveResult solve_optimal_assignment(const MarketInstance& inst, const PaymentSchedule& payments,
                                     const SolveOptions& options) {
  const auto weights = objective_weights(inst, options.objective, &payments);
  const auto caps = capacities(inst);
  SolveResult result = solve_weighted_b_matching(weights, caps);
  if (options.lp_cross_check) {
    auto relax = solve_lp_relaxation(inst, weights);
    result.stats.lp_pivots = relax.pivots;
    result.stats.lp_agrees = relax.integral && relax.objective == result.objective;
  }
  return result;
}

}  // namespace mobmarket
