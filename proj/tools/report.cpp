#include "report.hpp"

#include <iomanip>
#include <variant>

namespace mobmarket::cli {
namespace {

using json = nlohmann::ordered_json;

std::string money(const Money& x) { return format_money(x); }

std::string vehicle_name(const MarketInstance& inst, std::optional<std::size_t> j) {
  return j ? inst.vehicles()[*j].id : std::string("-");
}

json assignment_json(const MarketInstance& inst, const Assignment& a) {
  json out = json::object();
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    out[inst.travelers()[i].id] = vehicle_name(inst, a.vehicle_of(i));
  }
  return out;
}

json pair_table(const MarketInstance& inst, const PairMatrix<Money>& m) {
  json out = json::array();
  for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      if (!m.has(i, j)) continue;
      out.push_back({{"traveler", inst.travelers()[i].id}, {"vehicle", inst.vehicles()[j].id}, {"value", money(*m.at(i, j))}});
    }
  }
  return out;
}

json violations_json(const MarketInstance& inst, const CheckReport& report) {
  json out = json::array();
  for (const auto& v : report.violations) {
    out.push_back({{"rule", to_string(v.kind)},
                   {"traveler", inst.travelers()[v.traveler].id},
                   {"vehicle", vehicle_name(inst, v.vehicle)},
                   {"lhs", money(v.lhs)},
                   {"rhs", money(v.rhs)}});
  }
  return out;
}

const char* to_string(CanonicalPoint p) {
  return p == CanonicalPoint::traveler_optimal ? "traveler-optimal" : "vehicle-optimal";
}

void print_violations(std::ostream& out, const json& list) {
  for (const auto& v : list) {
    out << "    " << v["rule"].get<std::string>() << "  " << v["traveler"].get<std::string>() << " @ "
        << v["vehicle"].get<std::string>() << "  (" << v["lhs"].get<std::string>() << " vs "
        << v["rhs"].get<std::string>() << ")\n";
  }
}

void print_pairs(std::ostream& out, const json& list, const char* indent = "    ") {
  for (const auto& p : list) {
    out << indent << std::left << std::setw(8) << p["traveler"].get<std::string>() << std::setw(8)
        << p["vehicle"].get<std::string>() << p["value"].get<std::string>() << "\n";
  }
}

}  // namespace

ReportDocument::ReportDocument(std::string command) {
  data_["command"] = std::move(command);
}

void ReportDocument::add_warnings(const MarketInstance& inst) {
  if (!inst.warnings().empty()) data_["warnings"] = inst.warnings();
}

void ReportDocument::add_solve(const MarketInstance& inst, const SolveResult& result, Objective objective) {
  json s;
  s["objective_kind"] = to_string(objective);
  s["objective"] = money(result.objective);
  s["assignment"] = assignment_json(inst, result.assignment);
  if (result.dual_certificate) {
    json prices;
    for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
      prices["travelers"][inst.travelers()[i].id] = money(result.dual_certificate->traveler_price[i]);
    }
    for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
      prices["vehicles"][inst.vehicles()[j].id] = money(result.dual_certificate->vehicle_price[j]);
    }
    s["dual_certificate"] = prices;
  }
  s["augmentations"] = result.stats.augmentations;
  s["path_searches"] = result.stats.path_searches;
  if (result.stats.lp_agrees) s["lp_agrees"] = *result.stats.lp_agrees;
  data_["solve"] = s;
}

void ReportDocument::add_assignment(const MarketInstance& inst, const Assignment& a) {
  data_["assignment"] = assignment_json(inst, a);
}

void ReportDocument::add_welfare(const MarketInstance& inst, const Assignment& a, const PaymentSchedule* payments) {
  json w;
  w["welfare_surplus"] = money(welfare_surplus(inst, a));
  if (payments) w["welfare_paper"] = money(welfare_paper(inst, a, *payments));
  json gaps = json::object();
  auto g = cost_recovery_gap(inst, a);
  for (std::size_t j = 0; j < inst.vehicle_count(); ++j) gaps[inst.vehicles()[j].id] = money(g[j]);
  w["cost_recovery_gap"] = gaps;
  data_["welfare"] = w;
}

void ReportDocument::add_feasibility(const MarketInstance& inst, const FeasibilityReport& report) {
  json f;
  f["verdict"] = report.verdict;
  f["violations"] = violations_json(inst, report);
  json table = json::array();
  for (const auto& u : report.utility_identity) {
    table.push_back({{"traveler", inst.travelers()[u.traveler].id},
                     {"vehicle", inst.vehicles()[u.vehicle].id},
                     {"holds", u.holds}});
  }
  f["utility_identity"] = table;
  data_["feasibility"] = f;
}

void ReportDocument::add_stability(const MarketInstance& inst, const CheckReport& report, StabilityRule rule) {
  data_["stability"] = {{"rule", to_string(rule)}, {"verdict", report.verdict}, {"violations", violations_json(inst, report)}};
}

void ReportDocument::add_stability_undefined(StabilityRule rule) {
  data_["stability"] = {{"rule", to_string(rule)}, {"verdict", nullptr}, {"violations", json::array()}};
}

void ReportDocument::add_payments(const MarketInstance& inst, const PaymentSchedule& t) {
  data_["payments"] = pair_table(inst, t);
}

void ReportDocument::add_synthesis(const MarketInstance& inst, const SynthesisOutcome& outcome, StabilityRule rule,
                                   CanonicalPoint point) {
  json s;
  s["rule"] = to_string(rule);
  s["point"] = to_string(point);
  if (const auto* ok = std::get_if<StablePayments>(&outcome)) {
    s["status"] = "STABLE";
    s["payments"] = pair_table(inst, ok->payments);
    s["traveler_profit"] = pair_table(inst, ok->allocation.traveler_profit);
    s["vehicle_profit"] = pair_table(inst, ok->allocation.vehicle_profit);
  } else {
    const auto& bad = std::get<InfeasibleStability>(outcome);
    s["status"] = "INFEASIBLE";
    json cert = json::array();
    for (std::size_t r = 0; r < bad.system.rows.size(); ++r) {
      if (bad.certificate.multipliers[r] == 0) continue;
      cert.push_back({{"row", bad.system.rows[r].label}, {"multiplier", money(bad.certificate.multipliers[r])}});
    }
    s["certificate"] = cert;
    s["certificate_valid"] = lp::verify_certificate(bad.system, bad.certificate);
  }
  data_["synthesis"] = s;
}

void ReportDocument::add_oracle(const MarketInstance& inst, const OracleResult& oracle, const SolveResult& solver) {
  json o;
  o["objective"] = money(oracle.objective);
  o["solver_objective"] = money(solver.objective);
  o["optimal_count"] = oracle.optimal.size();
  json list = json::array();
  for (const auto& a : oracle.optimal) list.push_back(assignment_json(inst, a));
  o["optimal"] = list;
  o["agrees"] = oracle.objective == solver.objective;
  data_["oracle"] = o;
}

void ReportDocument::render_machine(std::ostream& out) const { out << data_.dump(2) << "\n"; }

void ReportDocument::render_text(std::ostream& out) const {
  auto verdict = [](const json& v) -> std::string {
    if (v.is_null()) return "undefined";
    return v.get<bool>() ? "true" : "false";
  };
  if (data_.contains("warnings")) {
    for (const auto& w : data_["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  }
  if (data_.contains("solve")) {
    const auto& s = data_["solve"];
    out << "solve\n";
    out << "  objective (" << s["objective_kind"].get<std::string>() << "): " << s["objective"].get<std::string>() << "\n";
    out << "  assignment:\n";
    for (const auto& [t, v] : s["assignment"].items()) out << "    " << t << " -> " << v.get<std::string>() << "\n";
    if (s.contains("dual_certificate")) {
      out << "  dual prices:\n";
      for (const auto& [k, v] : s["dual_certificate"]["travelers"].items()) {
        out << "    " << k << " " << v.get<std::string>() << "\n";
      }
      for (const auto& [k, v] : s["dual_certificate"]["vehicles"].items()) {
        out << "    " << k << " " << v.get<std::string>() << "\n";
      }
    }
    out << "  augmentations: " << s["augmentations"].get<std::size_t>() << ", path searches: "
        << s["path_searches"].get<std::size_t>() << "\n";
    if (s.contains("lp_agrees")) out << "  lp relaxation agrees: " << verdict(s["lp_agrees"]) << "\n";
  }
  if (data_.contains("assignment")) {
    out << "assignment\n";
    for (const auto& [t, v] : data_["assignment"].items()) out << "  " << t << " -> " << v.get<std::string>() << "\n";
  }
  if (data_.contains("payments")) {
    out << "payments\n";
    print_pairs(out, data_["payments"]);
  }
  if (data_.contains("welfare")) {
    const auto& w = data_["welfare"];
    out << "welfare\n";
    out << "  surplus: " << w["welfare_surplus"].get<std::string>() << "\n";
    if (w.contains("welfare_paper")) out << "  utilitarian: " << w["welfare_paper"].get<std::string>() << "\n";
    out << "  cost recovery gap:\n";
    for (const auto& [k, v] : w["cost_recovery_gap"].items()) out << "    " << k << " " << v.get<std::string>() << "\n";
  }
  if (data_.contains("feasibility")) {
    const auto& f = data_["feasibility"];
    out << "feasibility: " << verdict(f["verdict"]) << "\n";
    print_violations(out, f["violations"]);
    if (!f["utility_identity"].empty()) {
      out << "  utility identity (profit sum = utility - cost share):\n";
      for (const auto& u : f["utility_identity"]) {
        out << "    " << u["traveler"].get<std::string>() << " @ " << u["vehicle"].get<std::string>() << "  "
            << verdict(u["holds"]) << "\n";
      }
    }
  }
  if (data_.contains("stability")) {
    const auto& s = data_["stability"];
    out << "stability (" << s["rule"].get<std::string>() << "): " << verdict(s["verdict"]) << "\n";
    print_violations(out, s["violations"]);
  }
  if (data_.contains("synthesis")) {
    const auto& s = data_["synthesis"];
    out << "synthesis (" << s["rule"].get<std::string>() << ", " << s["point"].get<std::string>()
        << "): " << s["status"].get<std::string>() << "\n";
    if (s["status"] == "STABLE") {
      out << "  payments:\n";
      print_pairs(out, s["payments"]);
      out << "  traveler profit:\n";
      print_pairs(out, s["traveler_profit"]);
      out << "  vehicle profit:\n";
      print_pairs(out, s["vehicle_profit"]);
    } else {
      out << "  certificate (valid: " << verdict(s["certificate_valid"]) << "):\n";
      for (const auto& r : s["certificate"]) {
        out << "    " << r["multiplier"].get<std::string>() << "  x  " << r["row"].get<std::string>() << "\n";
      }
    }
  }
  if (data_.contains("oracle")) {
    const auto& o = data_["oracle"];
    out << "oracle\n";
    out << "  objective: " << o["objective"].get<std::string>() << "\n";
    out << "  solver objective: " << o["solver_objective"].get<std::string>() << "\n";
    out << "  optimal assignments: " << o["optimal_count"].get<std::size_t>() << "\n";
    for (const auto& a : o["optimal"]) {
      out << "   ";
      for (const auto& [t, v] : a.items()) out << " " << t << "->" << v.get<std::string>();
      out << "\n";
    }
    out << "  agrees: " << verdict(o["agrees"]) << "\n";
  }
}

}  // namespace mobmarket::cli
