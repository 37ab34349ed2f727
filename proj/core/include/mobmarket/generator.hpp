#pragma once

#include "mobmarket/market.hpp"

#include <cstddef>
#include <cstdint>

namespace mobmarket {

struct GeneratorOptions {
  std::uint64_t seed = 0;
  std::size_t travelers = 5;
  std::size_t vehicles = 3;
  int max_capacity = 3;
  /// Clone travelers and vehicles so that ties and multiple optima are common.
  bool degenerate = false;
  CostShareMode mode = CostShareMode::per_seat;
  std::size_t min_vertices = 3;
  std::size_t max_vertices = 6;
  std::size_t max_extra_edges = 4;
  std::size_t max_route_length = 4;
  /// Every money value is a multiple of 1 / lattice.
  int lattice = 2;
};

/// Random valid instance. Identical options give identical instances on
/// every platform: sampling does not depend on the standard library's
/// distribution implementations.
MarketInstance generate_instance(const GeneratorOptions& options);

}  // namespace mobmarket
