#pragma once

#include "mobmarket/money.hpp"
#include "mobmarket/network.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mobmarket {

using TravelerId = std::string;
using VehicleId = std::string;

struct Traveler {
  TravelerId id;
  OdPair od;
  Money v_max;  ///< upper bound of satisfaction
  Money v_min;  ///< minimum accepted value
  /// Inconvenience cost per vehicle id. A missing entry makes the pair
  /// incompatible even when the route covers the trip.
  std::map<VehicleId, Money> inconvenience;

  friend bool operator==(const Traveler&, const Traveler&) = default;
};

struct Vehicle {
  VehicleId id;
  Route route;
  int capacity = 1;
  Money operating_cost;
  /// Per-traveler cost shares, used only in explicit cost-share mode.
  std::optional<std::map<TravelerId, Money>> cost_shares;

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

enum class CostShareMode { per_seat, explicit_shares };

const char* to_string(CostShareMode mode);
std::optional<CostShareMode> parse_cost_share_mode(std::string_view text);

/// Dense traveler x vehicle table whose cells are present only for
/// compatible pairs. Incompatible cells are empty, never a number.
template <class T>
class PairMatrix {
 public:
  PairMatrix() = default;
  PairMatrix(std::size_t travelers, std::size_t vehicles)
      : travelers_(travelers), vehicles_(vehicles), cells_(travelers * vehicles) {}

  std::size_t traveler_count() const noexcept { return travelers_; }
  std::size_t vehicle_count() const noexcept { return vehicles_; }

  const std::optional<T>& at(std::size_t i, std::size_t j) const { return cells_.at(i * vehicles_ + j); }
  std::optional<T>& at(std::size_t i, std::size_t j) { return cells_.at(i * vehicles_ + j); }
  bool has(std::size_t i, std::size_t j) const { return at(i, j).has_value(); }

  friend bool operator==(const PairMatrix&, const PairMatrix&) = default;

 private:
  std::size_t travelers_ = 0;
  std::size_t vehicles_ = 0;
  std::vector<std::optional<T>> cells_;
};

/// Payment t for every compatible pair, including pairs that are not matched;
/// the stability check compares against those counterfactual prices.
using PaymentSchedule = PairMatrix<Money>;

/// The full market: network, both sides, and the cost-share rule.
/// Construction validates every invariant and derives compatibility.
class MarketInstance {
 public:
  /// Throws ValidationError listing every violated rule. n < m is not an
  /// error; it is reported through warnings().
  MarketInstance(Network network, std::vector<Traveler> travelers, std::vector<Vehicle> vehicles,
                 CostShareMode mode = CostShareMode::per_seat);

  const Network& network() const noexcept { return network_; }
  const std::vector<Traveler>& travelers() const noexcept { return travelers_; }
  const std::vector<Vehicle>& vehicles() const noexcept { return vehicles_; }
  CostShareMode cost_share_mode() const noexcept { return mode_; }
  std::size_t traveler_count() const noexcept { return travelers_.size(); }
  std::size_t vehicle_count() const noexcept { return vehicles_.size(); }

  std::optional<std::size_t> traveler_index(const TravelerId& id) const;
  std::optional<std::size_t> vehicle_index(const VehicleId& id) const;

  bool compatible(std::size_t i, std::size_t j) const { return compatibility_.at(i * vehicles_.size() + j); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Same data under a different cost-share rule (revalidated).
  MarketInstance with_cost_share_mode(CostShareMode mode) const;

  friend bool operator==(const MarketInstance& a, const MarketInstance& b) {
    return a.network_ == b.network_ && a.travelers_ == b.travelers_ && a.vehicles_ == b.vehicles_ &&
           a.mode_ == b.mode_;
  }

 private:
  Network network_;
  std::vector<Traveler> travelers_;
  std::vector<Vehicle> vehicles_;
  CostShareMode mode_;
  std::vector<bool> compatibility_;
  std::vector<std::string> warnings_;
};

/// Recomputes the compatibility table from scratch.
std::vector<std::vector<bool>> compatibility_matrix(const MarketInstance& inst);

/// Which vehicle (if any) each traveler rides.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t travelers) : vehicle_of_(travelers) {}

  std::size_t traveler_count() const noexcept { return vehicle_of_.size(); }
  std::optional<std::size_t> vehicle_of(std::size_t i) const { return vehicle_of_.at(i); }
  bool is_matched(std::size_t i, std::size_t j) const { return vehicle_of_.at(i) == j; }
  void assign(std::size_t i, std::size_t j) { vehicle_of_.at(i) = j; }
  void unassign(std::size_t i) { vehicle_of_.at(i).reset(); }

  /// Travelers riding vehicle j, in index order.
  std::vector<std::size_t> riders(std::size_t j) const;
  std::size_t occupancy(std::size_t j) const;
  std::size_t matched_count() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::optional<std::size_t>> vehicle_of_;
};

/// Throws ValidationError if `a` uses an incompatible pair, exceeds a
/// capacity, or has the wrong size.
void validate_assignment(const MarketInstance& inst, const Assignment& a);

/// Throws ValidationError unless every compatible pair carries a nonnegative payment.
void validate_payments(const MarketInstance& inst, const PaymentSchedule& t);

/// v_max - inconvenience. Throws IncompatiblePairError if the pair is not compatible.
Money valuation(const MarketInstance& inst, std::size_t i, std::size_t j);

/// c_j / capacity_j in per-seat mode, the stored share in explicit mode.
Money cost_share(const MarketInstance& inst, std::size_t i, std::size_t j);

/// valuation - payment for a ride on `vehicle`; zero when unassigned.
Money utility(const MarketInstance& inst, std::size_t i, std::optional<std::size_t> vehicle,
              const Money& payment);

/// valuation - cost share on compatible pairs; empty cells elsewhere.
PairMatrix<Money> surplus_matrix(const MarketInstance& inst);

/// Sum of matched utilities plus the operating cost of every idle vehicle.
/// Throws ValidationError if a matched pair has no payment.
Money welfare_paper(const MarketInstance& inst, const Assignment& a, const PaymentSchedule& t);

/// Sum of pair surpluses over matched pairs; the solver's objective.
Money welfare_surplus(const MarketInstance& inst, const Assignment& a);

/// Per vehicle: operating cost minus the shares its riders carry. An idle
/// vehicle's gap is its whole operating cost. Nonnegative in per-seat mode.
std::vector<Money> cost_recovery_gap(const MarketInstance& inst, const Assignment& a);

}  // namespace mobmarket
