#include "cli.hpp"

#include "report.hpp"

#include "mobmarket/errors.hpp"
#include "mobmarket/generator.hpp"
#include "mobmarket/instance_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace mobmarket::cli {
namespace {

struct Flags {
  std::string path;
  std::string payments;
  std::string cost_share_mode;
  std::string objective;
  bool classic_core = false;
  bool paper_literal = false;
  std::string point = "traveler";
  std::string format = "text";
  bool oracle = false;
  std::uint64_t seed = 0;
  std::size_t n = 5;
  std::size_t m = 3;
  int max_capacity = 3;
  bool degenerate = false;
  std::string output;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

StabilityRule rule_of(const Flags& f) {
  if (f.classic_core && f.paper_literal) throw UsageError("--classic-core and --paper-literal are exclusive");
  return f.paper_literal ? StabilityRule::paper_literal : StabilityRule::classic_core;
}

struct Loaded {
  InstanceDocument doc;
  Objective objective;
};

Loaded load(const Flags& f) {
  InstanceDocument doc = parse_instance_document(read_source(f.path));
  if (!f.cost_share_mode.empty()) {
    auto mode = parse_cost_share_mode(f.cost_share_mode);
    if (!mode) throw UsageError("--cost-share-mode must be per_seat or explicit");
    doc.instance = doc.instance.with_cost_share_mode(*mode);
  }
  Objective objective = doc.objective;
  if (!f.objective.empty()) {
    auto o = parse_objective(f.objective);
    if (!o) throw UsageError("--objective must be surplus or paper");
    objective = *o;
  }
  return {std::move(doc), objective};
}

// Payments from the document, then the --payments overrides; validated complete.
std::optional<PaymentSchedule> payments_for(const Loaded& l, const Assignment& a, const Flags& f, bool required) {
  const MarketInstance& inst = l.doc.instance;
  if (!l.doc.payments && f.payments.empty()) {
    if (required) throw ValidationError("payments", "", "this command needs a payment schedule");
    return std::nullopt;
  }
  PaymentSchedule t = l.doc.payments ? *l.doc.payments : PaymentSchedule(inst.traveler_count(), inst.vehicle_count());
  if (!f.payments.empty()) apply_payment_overrides(inst, a, t, f.payments);
  validate_payments(inst, t);
  return t;
}

SolveResult solve_for(const Loaded& l, const Flags& f) {
  SolveOptions options{l.objective, false};
  if (l.objective == Objective::paper) {
    // The override shorthand TRAVELER=VALUE needs an assignment; use the document's if any.
    Assignment base = l.doc.assignment.value_or(Assignment(l.doc.instance.traveler_count()));
    auto t = payments_for(l, base, f, true);
    return solve_optimal_assignment(l.doc.instance, *t, options);
  }
  return solve_optimal_assignment(l.doc.instance, options);
}

Assignment assignment_for(const Loaded& l, const Flags& f) {
  if (l.doc.assignment) return *l.doc.assignment;
  return solve_for(l, f).assignment;
}

void emit(const ReportDocument& report, const Flags& f, std::ostream& out) {
  if (f.format == "machine") {
    report.render_machine(out);
  } else {
    report.render_text(out);
  }
}

int cmd_solve(const Flags& f, std::ostream& out) {
  Loaded l = load(f);
  SolveResult r = solve_for(l, f);
  ReportDocument report("solve");
  report.add_warnings(l.doc.instance);
  report.add_solve(l.doc.instance, r, l.objective);
  auto t = payments_for(l, r.assignment, f, false);
  report.add_welfare(l.doc.instance, r.assignment, t ? &*t : nullptr);
  emit(report, f, out);
  return exit_ok;
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  Loaded l = load(f);
  SolveResult r = solve_for(l, f);
  PairMatrix<Money> weights;
  if (l.objective == Objective::paper) {
    Assignment base = l.doc.assignment.value_or(Assignment(l.doc.instance.traveler_count()));
    auto t = payments_for(l, base, f, true);
    weights = objective_weights(l.doc.instance, Objective::paper, &*t);
  } else {
    weights = objective_weights(l.doc.instance, Objective::surplus);
  }
  OracleResult o = oracle_optimum(l.doc.instance, weights);
  ReportDocument report("oracle");
  report.add_warnings(l.doc.instance);
  report.add_solve(l.doc.instance, r, l.objective);
  report.add_oracle(l.doc.instance, o, r);
  emit(report, f, out);
  return o.objective == r.objective ? exit_ok : exit_verdict_false;
}

// Feasibility and stability of the given (or optimal) assignment and payments.
bool evaluate(const Loaded& l, const Assignment& a, const PaymentSchedule& t, StabilityRule rule,
              ReportDocument& report) {
  const MarketInstance& inst = l.doc.instance;
  FeasibilityReport feasibility = check_feasibility(inst, a, compute_profits(inst, a, t));
  report.add_feasibility(inst, feasibility);
  if (!feasibility.verdict) {
    report.add_stability_undefined(rule);
    return false;
  }
  CheckReport stability = check_stability(inst, a, t, rule);
  report.add_stability(inst, stability, rule);
  return stability.verdict;
}

int cmd_check(const Flags& f, std::ostream& out) {
  Loaded l = load(f);
  const StabilityRule rule = rule_of(f);
  Assignment a = assignment_for(l, f);
  validate_assignment(l.doc.instance, a);
  PaymentSchedule t = *payments_for(l, a, f, true);
  ReportDocument report("check");
  report.add_warnings(l.doc.instance);
  report.add_assignment(l.doc.instance, a);
  report.add_payments(l.doc.instance, t);
  report.add_welfare(l.doc.instance, a, &t);
  bool ok = evaluate(l, a, t, rule, report);
  emit(report, f, out);
  return ok ? exit_ok : exit_verdict_false;
}

CanonicalPoint point_of(const Flags& f) {
  if (f.point == "traveler") return CanonicalPoint::traveler_optimal;
  if (f.point == "vehicle") return CanonicalPoint::vehicle_optimal;
  throw UsageError("--point must be traveler or vehicle");
}

int cmd_synthesize(const Flags& f, std::ostream& out) {
  Loaded l = load(f);
  const StabilityRule rule = rule_of(f);
  Assignment a = assignment_for(l, f);
  SynthesisOutcome outcome = synthesize_stable_payments(l.doc.instance, a, {rule, point_of(f)});
  ReportDocument report("synthesize");
  report.add_warnings(l.doc.instance);
  report.add_assignment(l.doc.instance, a);
  report.add_synthesis(l.doc.instance, outcome, rule, point_of(f));
  emit(report, f, out);
  return std::holds_alternative<StablePayments>(outcome) ? exit_ok : exit_verdict_false;
}

int cmd_report(const Flags& f, std::ostream& out) {
  Loaded l = load(f);
  const StabilityRule rule = rule_of(f);
  const MarketInstance& inst = l.doc.instance;
  SolveResult r = solve_for(l, f);
  Assignment a = l.doc.assignment.value_or(r.assignment);
  ReportDocument report("report");
  report.add_warnings(inst);
  report.add_solve(inst, r, l.objective);
  if (l.doc.assignment) report.add_assignment(inst, a);
  auto t = payments_for(l, a, f, false);
  report.add_welfare(inst, a, t ? &*t : nullptr);
  bool ok = true;
  if (t) {
    report.add_payments(inst, *t);
    ok = evaluate(l, a, *t, rule, report);
  }
  SynthesisOutcome outcome = synthesize_stable_payments(inst, a, {rule, point_of(f)});
  report.add_synthesis(inst, outcome, rule, point_of(f));
  if (f.oracle) {
    OracleResult o = oracle_optimum(inst, l.objective == Objective::paper
                                              ? objective_weights(inst, Objective::paper, t ? &*t : nullptr)
                                              : objective_weights(inst, Objective::surplus));
    report.add_oracle(inst, o, r);
    ok = ok && o.objective == r.objective;
  }
  emit(report, f, out);
  return ok ? exit_ok : exit_verdict_false;
}

int cmd_generate(const Flags& f, std::ostream& out) {
  GeneratorOptions g;
  g.seed = f.seed;
  g.travelers = f.n;
  g.vehicles = f.m;
  g.max_capacity = f.max_capacity;
  g.degenerate = f.degenerate;
  if (!f.cost_share_mode.empty()) {
    auto mode = parse_cost_share_mode(f.cost_share_mode);
    if (!mode) throw UsageError("--cost-share-mode must be per_seat or explicit");
    g.mode = *mode;
  }
  InstanceDocument doc{kSchemaVersion, generate_instance(g), Objective::surplus, std::nullopt, std::nullopt};
  if (!f.objective.empty()) {
    auto o = parse_objective(f.objective);
    if (!o) throw UsageError("--objective must be surplus or paper");
    doc.objective = *o;
  }
  const std::string text = serialize_instance(doc);
  if (f.output.empty()) {
    out << text;
  } else {
    std::ofstream file(f.output, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + f.output + "'");
    file << text;
  }
  return exit_ok;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Traveler and vehicle matching market: optimal assignment and stable payments", "mobmarket"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  auto instance_flags = [&](CLI::App* sub) {
    sub->add_option("instance", f.path, "Instance file, or - for standard input")->required();
    sub->add_option("--payments", f.payments, "Payment overrides: T1=7,T2@V1=3");
    sub->add_option("--cost-share-mode", f.cost_share_mode, "per_seat or explicit");
    sub->add_option("--objective", f.objective, "surplus or paper");
    sub->add_option("--format", f.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
  };
  auto rule_flags = [&](CLI::App* sub) {
    sub->add_flag("--classic-core", f.classic_core, "Assignment-game stability (default)");
    sub->add_flag("--paper-literal", f.paper_literal, "Stability with the cost share subtracted from utility");
    sub->add_option("--point", f.point, "Synthesized point: traveler or vehicle")
        ->check(CLI::IsMember({"traveler", "vehicle"}));
  };

  CLI::App* solve = app.add_subcommand("solve", "Optimal assignment with dual certificate and welfare");
  instance_flags(solve);
  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive optimum and agreement with the solver");
  instance_flags(oracle);
  CLI::App* check = app.add_subcommand("check", "Feasibility and stability of given payments");
  instance_flags(check);
  rule_flags(check);
  CLI::App* synth = app.add_subcommand("synthesize", "Stable payments for the assignment, or a certificate");
  instance_flags(synth);
  rule_flags(synth);
  CLI::App* report = app.add_subcommand("report", "Every section for one instance");
  instance_flags(report);
  rule_flags(report);
  report->add_flag("--oracle", f.oracle, "Cross-check the solver against enumeration");
  CLI::App* generate = app.add_subcommand("generate", "Random instance from a seed");
  generate->add_option("--seed", f.seed, "Random seed");
  generate->add_option("--n", f.n, "Number of travelers");
  generate->add_option("--m", f.m, "Number of vehicles");
  generate->add_option("--max-capacity", f.max_capacity, "Largest vehicle capacity")->check(CLI::PositiveNumber);
  generate->add_flag("--degenerate", f.degenerate, "Clone travelers and vehicles to create ties");
  generate->add_option("--cost-share-mode", f.cost_share_mode, "per_seat or explicit");
  generate->add_option("--objective", f.objective, "surplus or paper");
  generate->add_option("-o,--output", f.output, "Write to a file instead of standard output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'mobmarket --help' for usage\n";
    return exit_invalid;
  }

  try {
    if (solve->parsed()) return cmd_solve(f, out);
    if (oracle->parsed()) return cmd_oracle(f, out);
    if (check->parsed()) return cmd_check(f, out);
    if (synth->parsed()) return cmd_synthesize(f, out);
    if (report->parsed()) return cmd_report(f, out);
    if (generate->parsed()) return cmd_generate(f, out);
  } catch (const ParseError& e) {
    err << "syntax error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) err << "invalid: " << issue.to_string() << "\n";
    return exit_invalid;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const OracleScaleExceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const IncompatiblePairError& e) {
    err << "invalid: " << e.what() << "\n";
    return exit_invalid;
  }
  err << "error: no command given\n";
  return exit_invalid;
}

}  // namespace mobmarket::cli
