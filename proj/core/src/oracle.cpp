#include "mobmarket/solver.hpp"

#include <cmath>
#include <string>

namespace mobmarket {

void check_oracle_scale(const MarketInstance& inst, const OracleLimits& limits) {
  const auto n = inst.traveler_count();
  const double maps = std::pow(static_cast<double>(inst.vehicle_count() + 1), static_cast<double>(n));
  if (n > limits.max_travelers || maps > limits.max_maps) {
    throw OracleScaleExceeded("oracle scale exceeded: " + std::to_string(n) + " travelers, " +
                              std::to_string(inst.vehicle_count()) + " vehicles");
  }
}

void for_each_assignment(const MarketInstance& inst, const std::function<void(const Assignment&)>& visit,
                         const OracleLimits& limits) {
  check_oracle_scale(inst, limits);
  const std::size_t n = inst.traveler_count();
  const std::size_t m = inst.vehicle_count();
  Assignment current(n);
  std::vector<int> room = capacities(inst);

  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      visit(current);
      return;
    }
    current.unassign(i);
    self(self, i + 1);
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.compatible(i, j) || room[j] == 0) continue;
      --room[j];
      current.assign(i, j);
      self(self, i + 1);
      current.unassign(i);
      ++room[j];
    }
  };
  recurse(recurse, 0);
}

std::vector<Assignment> enumerate_assignments(const MarketInstance& inst, const OracleLimits& limits) {
  std::vector<Assignment> out;
  for_each_assignment(inst, [&](const Assignment& a) { out.push_back(a); }, limits);
  return out;
}

OracleResult oracle_optimum(const MarketInstance& inst, const PairMatrix<Money>& weights,
                            const OracleLimits& limits) {
  OracleResult result;
  bool first = true;
  for_each_assignment(
      inst,
      [&](const Assignment& a) {
        Money value = matched_weight(weights, a);
        if (first || value > result.objective) {
          first = false;
          result.objective = value;
          result.optimal.clear();
          result.optimal.push_back(a);
        } else if (value == result.objective) {
          result.optimal.push_back(a);
        }
      },
      limits);
  return result;
}

OracleResult oracle_optimum(const MarketInstance& inst, const OracleLimits& limits) {
  return oracle_optimum(inst, surplus_matrix(inst), limits);
}

}  // namespace mobmarket
