#include "mobmarket/market.hpp"

#include "mobmarket/errors.hpp"

#include <set>
#include <utility>

namespace mobmarket {

const char* to_string(CostShareMode mode) {
  return mode == CostShareMode::per_seat ? "per_seat" : "explicit";
}

std::optional<CostShareMode> parse_cost_share_mode(std::string_view text) {
  if (text == "per_seat") return CostShareMode::per_seat;
  if (text == "explicit") return CostShareMode::explicit_shares;
  return std::nullopt;
}

MarketInstance::MarketInstance(Network network, std::vector<Traveler> travelers,
                               std::vector<Vehicle> vehicles, CostShareMode mode)
    : network_(std::move(network)),
      travelers_(std::move(travelers)),
      vehicles_(std::move(vehicles)),
      mode_(mode) {
  std::vector<ValidationIssue> issues;
  std::set<std::string> seen;
  // gmp compares rationals correctly only in lowest terms.
  for (auto& v : vehicles_) {
    if (v.cost_shares && v.cost_shares->empty()) v.cost_shares.reset();
    v.operating_cost.canonicalize();
    if (v.cost_shares) {
      for (auto& [tid, share] : *v.cost_shares) share.canonicalize();
    }
  }
  for (auto& t : travelers_) {
    t.v_max.canonicalize();
    t.v_min.canonicalize();
    for (auto& [vid, phi] : t.inconvenience) phi.canonicalize();
  }

  std::vector<bool> route_ok(vehicles_.size(), false);
  for (std::size_t j = 0; j < vehicles_.size(); ++j) {
    const Vehicle& v = vehicles_[j];
    if (!seen.insert(v.id).second) issues.push_back({"vehicle", v.id, "duplicate vehicle id"});
    if (v.capacity < 1) issues.push_back({"vehicle", v.id, "capacity must be at least 1"});
    if (v.operating_cost < 0) issues.push_back({"vehicle", v.id, "operating cost must be nonnegative"});
    try {
      route_vertex_sequence(network_, v.route);
      route_ok[j] = true;
    } catch (const ValidationError& e) {
      for (const auto& issue : e.issues()) issues.push_back({"vehicle", v.id, issue.rule + " (" + issue.entity + ")"});
    }
    if (v.cost_shares) {
      for (const auto& [tid, share] : *v.cost_shares) {
        if (share < 0) issues.push_back({"vehicle", v.id, "cost share for '" + tid + "' is negative"});
      }
    }
  }

  seen.clear();
  std::vector<bool> od_ok(travelers_.size(), false);
  for (std::size_t i = 0; i < travelers_.size(); ++i) {
    const Traveler& t = travelers_[i];
    if (!seen.insert(t.id).second) issues.push_back({"traveler", t.id, "duplicate traveler id"});
    try {
      validate_od(network_, t.od, t.id);
      od_ok[i] = true;
    } catch (const ValidationError& e) {
      for (const auto& issue : e.issues()) issues.push_back({"traveler", t.id, "od: " + issue.rule});
    }
    if (t.v_min < 0) issues.push_back({"traveler", t.id, "v_min must be nonnegative"});
    if (t.v_min > t.v_max) issues.push_back({"traveler", t.id, "v_min exceeds v_max"});
    for (const auto& [vid, phi] : t.inconvenience) {
      if (phi < 0 || phi > t.v_max) {
        issues.push_back({"traveler", t.id, "inconvenience for '" + vid + "' outside [0, v_max]"});
      }
    }
  }

  for (const auto& t : travelers_) {
    for (const auto& [vid, phi] : t.inconvenience) {
      if (!vehicle_index(vid)) issues.push_back({"traveler", t.id, "inconvenience names unknown vehicle '" + vid + "'"});
    }
  }
  for (const auto& v : vehicles_) {
    if (!v.cost_shares) continue;
    for (const auto& [tid, share] : *v.cost_shares) {
      if (!traveler_index(tid)) issues.push_back({"vehicle", v.id, "cost share names unknown traveler '" + tid + "'"});
    }
  }

  compatibility_.assign(travelers_.size() * vehicles_.size(), false);
  for (std::size_t i = 0; i < travelers_.size(); ++i) {
    if (!od_ok[i]) continue;
    for (std::size_t j = 0; j < vehicles_.size(); ++j) {
      if (!route_ok[j] || !travelers_[i].inconvenience.contains(vehicles_[j].id)) continue;
      bool ok = covers(network_, vehicles_[j].route, travelers_[i].od);
      compatibility_[i * vehicles_.size() + j] = ok;
      if (ok && mode_ == CostShareMode::explicit_shares &&
          !(vehicles_[j].cost_shares && vehicles_[j].cost_shares->contains(travelers_[i].id))) {
        issues.push_back({"vehicle", vehicles_[j].id,
                          "explicit mode requires a cost share for compatible traveler '" + travelers_[i].id + "'"});
      }
    }
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  if (travelers_.size() < vehicles_.size()) {
    warnings_.push_back("fewer travelers (" + std::to_string(travelers_.size()) + ") than vehicles (" +
                        std::to_string(vehicles_.size()) + ")");
  }
}

std::optional<std::size_t> MarketInstance::traveler_index(const TravelerId& id) const {
  for (std::size_t i = 0; i < travelers_.size(); ++i) {
    if (travelers_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> MarketInstance::vehicle_index(const VehicleId& id) const {
  for (std::size_t j = 0; j < vehicles_.size(); ++j) {
    if (vehicles_[j].id == id) return j;
  }
  return std::nullopt;
}

MarketInstance MarketInstance::with_cost_share_mode(CostShareMode mode) const {
  return MarketInstance(network_, travelers_, vehicles_, mode);
}

std::vector<std::vector<bool>> compatibility_matrix(const MarketInstance& inst) {
  std::vector<std::vector<bool>> out(inst.traveler_count(), std::vector<bool>(inst.vehicle_count()));
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    const Traveler& t = inst.travelers()[i];
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      const Vehicle& v = inst.vehicles()[j];
      out[i][j] = t.inconvenience.contains(v.id) && covers(inst.network(), v.route, t.od);
    }
  }
  return out;
}

std::vector<std::size_t> Assignment::riders(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vehicle_of_.size(); ++i) {
    if (vehicle_of_[i] == j) out.push_back(i);
  }
  return out;
}

std::size_t Assignment::occupancy(std::size_t j) const {
  std::size_t count = 0;
  for (const auto& v : vehicle_of_) count += (v == j);
  return count;
}

std::size_t Assignment::matched_count() const {
  std::size_t count = 0;
  for (const auto& v : vehicle_of_) count += v.has_value();
  return count;
}

void validate_assignment(const MarketInstance& inst, const Assignment& a) {
  std::vector<ValidationIssue> issues;
  if (a.traveler_count() != inst.traveler_count()) {
    throw ValidationError("assignment", "", "assignment covers " + std::to_string(a.traveler_count()) +
                                                " travelers, instance has " +
                                                std::to_string(inst.traveler_count()));
  }
  std::vector<std::size_t> load(inst.vehicle_count(), 0);
  for (std::size_t i = 0; i < a.traveler_count(); ++i) {
    auto j = a.vehicle_of(i);
    if (!j) continue;
    if (*j >= inst.vehicle_count()) {
      issues.push_back({"assignment", inst.travelers()[i].id, "vehicle index out of range"});
      continue;
    }
    if (!inst.compatible(i, *j)) {
      issues.push_back({"assignment", inst.travelers()[i].id,
                        "pair with '" + inst.vehicles()[*j].id + "' is not compatible"});
    }
    ++load[*j];
  }
  for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
    if (load[j] > static_cast<std::size_t>(inst.vehicles()[j].capacity)) {
      issues.push_back({"assignment", inst.vehicles()[j].id, "capacity exceeded"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

void validate_payments(const MarketInstance& inst, const PaymentSchedule& t) {
  if (t.traveler_count() != inst.traveler_count() || t.vehicle_count() != inst.vehicle_count()) {
    throw ValidationError("payments", "", "payment matrix dimensions do not match the instance");
  }
  std::vector<ValidationIssue> issues;
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      const std::string pair = inst.travelers()[i].id + " " + inst.vehicles()[j].id;
      if (inst.compatible(i, j)) {
        if (!t.has(i, j)) {
          issues.push_back({"payments", pair, "missing payment for compatible pair"});
        } else if (*t.at(i, j) < 0) {
          issues.push_back({"payments", pair, "payment must be nonnegative"});
        }
      } else if (t.has(i, j)) {
        issues.push_back({"payments", pair, "payment given for incompatible pair"});
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

namespace {

void require_compatible(const MarketInstance& inst, std::size_t i, std::size_t j) {
  if (i >= inst.traveler_count() || j >= inst.vehicle_count() || !inst.compatible(i, j)) {
    std::string who = i < inst.traveler_count() ? inst.travelers()[i].id : std::to_string(i);
    std::string what = j < inst.vehicle_count() ? inst.vehicles()[j].id : std::to_string(j);
    throw IncompatiblePairError("traveler '" + who + "' and vehicle '" + what + "' are not compatible");
  }
}

}  // namespace

Money valuation(const MarketInstance& inst, std::size_t i, std::size_t j) {
  require_compatible(inst, i, j);
  const Traveler& t = inst.travelers()[i];
  return Money(t.v_max - t.inconvenience.at(inst.vehicles()[j].id));
}

Money cost_share(const MarketInstance& inst, std::size_t i, std::size_t j) {
  require_compatible(inst, i, j);
  const Vehicle& v = inst.vehicles()[j];
  if (inst.cost_share_mode() == CostShareMode::per_seat) {
    return Money(v.operating_cost / v.capacity);
  }
  const TravelerId& tid = inst.travelers()[i].id;
  if (!v.cost_shares || !v.cost_shares->contains(tid)) {
    throw ValidationError("vehicle", v.id, "no explicit cost share for traveler '" + tid + "'");
  }
  return v.cost_shares->at(tid);
}

Money utility(const MarketInstance& inst, std::size_t i, std::optional<std::size_t> vehicle,
              const Money& payment) {
  if (!vehicle) return Money(0);
  return Money(valuation(inst, i, *vehicle) - payment);
}

PairMatrix<Money> surplus_matrix(const MarketInstance& inst) {
  PairMatrix<Money> s(inst.traveler_count(), inst.vehicle_count());
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      if (inst.compatible(i, j)) s.at(i, j) = Money(valuation(inst, i, j) - cost_share(inst, i, j));
    }
  }
  return s;
}

Money welfare_paper(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t) {
  validate_assignment(inst, a);
  Money total = 0;
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    auto j = a.vehicle_of(i);
    if (!j) continue;
    if (!t.has(i, *j)) {
      throw ValidationError("payments", inst.travelers()[i].id + " " + inst.vehicles()[*j].id,
                            "missing payment for matched pair");
    }
    total += utility(inst, i, j, *t.at(i, *j));
  }
  for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
    if (a.occupancy(j) == 0) total += inst.vehicles()[j].operating_cost;
  }
  return total;
}

Money welfare_surplus(const MarketInstance& inst, const Assignment& a) {
  validate_assignment(inst, a);
  Money total = 0;
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    if (auto j = a.vehicle_of(i)) total += valuation(inst, i, *j) - cost_share(inst, i, *j);
  }
  return total;
}

std::vector<Money> cost_recovery_gap(const MarketInstance& inst, const Assignment& a) {
  validate_assignment(inst, a);
  std::vector<Money> gap;
  gap.reserve(inst.vehicle_count());
  for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
    Money g = inst.vehicles()[j].operating_cost;
    for (std::size_t i : a.riders(j)) g -= cost_share(inst, i, j);
    gap.push_back(g);
  }
  return gap;
}

}  // namespace mobmarket
