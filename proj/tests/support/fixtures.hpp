#pragma once

#include "mobmarket/generator.hpp"
#include "mobmarket/market.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace mobmarket;

inline Network abc() { return Network({"A", "B", "C"}, {{"e1", "A", "B"}, {"e2", "B", "C"}}); }

inline Traveler traveler(std::string id, std::string o, std::string d, Money v_max, Money v_min,
                         std::map<VehicleId, Money> phi) {
  return Traveler{std::move(id), {std::move(o), std::move(d)}, std::move(v_max), std::move(v_min), std::move(phi)};
}

inline Vehicle vehicle(std::string id, std::vector<EdgeId> route, int capacity, Money cost) {
  return Vehicle{std::move(id), Route{std::move(route)}, capacity, std::move(cost), std::nullopt};
}

/// Two travelers sharing one vehicle along A -> B -> C.
inline MarketInstance canonical() {
  return MarketInstance(abc(),
                        {traveler("T1", "A", "C", 10, 1, {{"V1", 2}}), traveler("T2", "B", "C", 6, 0, {{"V1", 0}})},
                        {vehicle("V1", {"e1", "e2"}, 2, 4)});
}

inline PaymentSchedule payments(const MarketInstance& inst, std::initializer_list<std::tuple<std::size_t, std::size_t, Money>> cells) {
  PaymentSchedule t(inst.traveler_count(), inst.vehicle_count());
  for (const auto& [i, j, x] : cells) t.at(i, j) = x;
  return t;
}

inline Assignment assignment(std::initializer_list<std::optional<std::size_t>> vehicles) {
  Assignment a(vehicles.size());
  std::size_t i = 0;
  for (auto j : vehicles) {
    if (j) a.assign(i, *j);
    ++i;
  }
  return a;
}

/// Copy of `inst` with every v_min set to zero.
inline MarketInstance without_v_min(const MarketInstance& inst) {
  auto ts = inst.travelers();
  for (auto& t : ts) t.v_min = 0;
  return MarketInstance(inst.network(), ts, inst.vehicles(), inst.cost_share_mode());
}

inline std::string data_path(const std::string& name) { return std::string(MOBMARKET_TEST_DATA) + "/" + name; }

}  // namespace fixtures
