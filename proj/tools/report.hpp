#pragma once

#include "mobmarket/allocation.hpp"
#include "mobmarket/solver.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>

namespace mobmarket::cli {

/// Everything a command reports. Sections are filled by the command that ran
/// and rendered either as text or as JSON from the same data, so the machine
/// form never omits a number the text form shows.
class ReportDocument {
 public:
  explicit ReportDocument(std::string command);

  void add_warnings(const MarketInstance& inst);
  void add_solve(const MarketInstance& inst, const SolveResult& result, Objective objective);
  /// A fixed assignment that was checked rather than solved for.
  void add_assignment(const MarketInstance& inst, const Assignment& a);
  void add_welfare(const MarketInstance& inst, const Assignment& a, const PaymentSchedule* payments);
  void add_feasibility(const MarketInstance& inst, const FeasibilityReport& report);
  void add_stability(const MarketInstance& inst, const CheckReport& report, StabilityRule rule);
  /// Stability could not be evaluated because the allocation is not feasible.
  void add_stability_undefined(StabilityRule rule);
  void add_payments(const MarketInstance& inst, const PaymentSchedule& t);
  void add_synthesis(const MarketInstance& inst, const SynthesisOutcome& outcome, StabilityRule rule,
                     CanonicalPoint point);
  void add_oracle(const MarketInstance& inst, const OracleResult& oracle, const SolveResult& solver);

  const nlohmann::ordered_json& data() const noexcept { return data_; }

  void render_text(std::ostream& out) const;
  void render_machine(std::ostream& out) const;

 private:
  nlohmann::ordered_json data_;
};

}  // namespace mobmarket::cli
