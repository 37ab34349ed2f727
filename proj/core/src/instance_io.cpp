#include "mobmarket/instance_io.hpp"

#include "mobmarket/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

namespace mobmarket {
namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Entry {
  std::size_t line;
  std::vector<Token> key;
  std::vector<Token> value;
};

struct Section {
  std::size_t line;
  std::string kind;
  std::string id;
  std::vector<Entry> entries;
};

std::vector<Token> split(std::string_view text, std::size_t column_offset) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < text.size()) {
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k >= text.size()) break;
    std::size_t start = k;
    while (k < text.size() && !std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    out.push_back({std::string(text.substr(start, k - start)), column_offset + start + 1});
  }
  return out;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '=' || c == '[' || c == ']' || c == '#' ||
           c == ',' || c == '@';
  });
}

// Top-level entries (before any header) land in a section with empty kind.
std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections{{0, "", "", {}}};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (eol == text.size()) break;
      continue;
    }
    if (line[first] == '[') {
      std::size_t close = line.find(']', first);
      if (close == std::string_view::npos) throw ParseError(line_no, first + 1, "unterminated section header");
      if (line.find_first_not_of(" \t", close + 1) != std::string_view::npos) {
        throw ParseError(line_no, close + 2, "trailing text after section header");
      }
      auto parts = split(line.substr(first + 1, close - first - 1), first + 1);
      if (parts.empty() || parts.size() > 2) {
        throw ParseError(line_no, first + 1, "section header must be [kind] or [kind id]");
      }
      Section s{line_no, parts[0].text, parts.size() == 2 ? parts[1].text : "", {}};
      if (parts.size() == 2 && !valid_identifier(s.id)) throw ParseError(line_no, parts[1].column, "invalid id");
      sections.push_back(std::move(s));
    } else {
      std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, first + 1, "expected 'key = value'");
      Entry e{line_no, split(line.substr(0, eq), 0), split(line.substr(eq + 1), eq + 1)};
      if (e.key.empty()) throw ParseError(line_no, eq + 1, "missing key before '='");
      sections.back().entries.push_back(std::move(e));
    }
    if (eol == text.size()) break;
  }
  return sections;
}

Money money_value(const Entry& e) {
  if (e.value.size() != 1) {
    throw ParseError(e.line, e.value.empty() ? 1 : e.value[1].column, "expected a single rational value");
  }
  try {
    return parse_money(e.value[0].text);
  } catch (const std::invalid_argument& err) {
    throw ParseError(e.line, e.value[0].column, err.what());
  }
}

std::string single_value(const Entry& e) {
  if (e.value.size() != 1) {
    throw ParseError(e.line, e.value.empty() ? e.key.back().column : e.value[1].column, "expected a single value");
  }
  return e.value[0].text;
}

std::vector<std::string> texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

void expect_key_arity(const Entry& e, std::size_t arity) {
  if (e.key.size() != arity) {
    throw ParseError(e.line, e.key.front().column,
                     "key '" + e.key.front().text + "' expects " + std::to_string(arity - 1) + " argument(s)");
  }
}

struct RawTraveler {
  std::size_t line;
  Traveler t;
  std::set<std::string> seen;
};

struct RawVehicle {
  std::size_t line;
  Vehicle v;
  std::set<std::string> seen;
};

}  // namespace

InstanceDocument parse_instance_document(std::string_view text) {
  auto sections = tokenize(text);
  std::vector<ValidationIssue> issues;

  int schema = -1;
  CostShareMode mode = CostShareMode::per_seat;
  Objective objective = Objective::surplus;
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  bool have_network = false;
  std::vector<RawTraveler> travelers;
  std::vector<RawVehicle> vehicles;
  std::vector<const Entry*> assignment_entries;
  std::vector<const Entry*> payment_entries;
  bool have_assignment = false;
  bool have_payments = false;

  for (const auto& s : sections) {
    auto needs_no_id = [&] {
      if (!s.id.empty()) throw ParseError(s.line, 1, "section [" + s.kind + "] takes no id");
    };
    auto needs_id = [&] {
      if (s.id.empty()) throw ParseError(s.line, 1, "section [" + s.kind + "] needs an id");
    };
    if (s.kind.empty()) {
      for (const auto& e : s.entries) {
        expect_key_arity(e, 1);
        if (e.key[0].text != "schema_version") throw ParseError(e.line, e.key[0].column, "unknown top-level key");
        try {
          schema = std::stoi(single_value(e));
        } catch (const std::logic_error&) {
          throw ParseError(e.line, e.value[0].column, "schema_version must be an integer");
        }
      }
    } else if (s.kind == "options") {
      needs_no_id();
      for (const auto& e : s.entries) {
        expect_key_arity(e, 1);
        const std::string value = single_value(e);
        if (e.key[0].text == "cost_share_mode") {
          auto m = parse_cost_share_mode(value);
          if (!m) throw ParseError(e.line, e.value[0].column, "cost_share_mode must be per_seat or explicit");
          mode = *m;
        } else if (e.key[0].text == "objective") {
          auto o = parse_objective(value);
          if (!o) throw ParseError(e.line, e.value[0].column, "objective must be surplus or paper");
          objective = *o;
        } else {
          throw ParseError(e.line, e.key[0].column, "unknown option '" + e.key[0].text + "'");
        }
      }
    } else if (s.kind == "network") {
      needs_no_id();
      have_network = true;
      for (const auto& e : s.entries) {
        if (e.key[0].text == "vertices") {
          expect_key_arity(e, 1);
          for (const auto& v : e.value) {
            if (!valid_identifier(v.text)) throw ParseError(e.line, v.column, "invalid vertex id");
            vertices.push_back(v.text);
          }
        } else if (e.key[0].text == "edge") {
          expect_key_arity(e, 2);
          if (e.value.size() != 2) throw ParseError(e.line, e.key[1].column, "edge needs '= tail head'");
          edges.push_back({e.key[1].text, e.value[0].text, e.value[1].text});
        } else {
          throw ParseError(e.line, e.key[0].column, "unknown network key '" + e.key[0].text + "'");
        }
      }
    } else if (s.kind == "traveler") {
      needs_id();
      RawTraveler raw{s.line, {}, {}};
      raw.t.id = s.id;
      for (const auto& e : s.entries) {
        const std::string& key = e.key[0].text;
        std::string slot = key == "phi" && e.key.size() == 2 ? "phi " + e.key[1].text : key;
        if (!raw.seen.insert(slot).second) issues.push_back({"traveler", s.id, "duplicate key '" + slot + "'"});
        if (key == "od") {
          expect_key_arity(e, 1);
          if (e.value.size() != 2) throw ParseError(e.line, e.key[0].column, "od needs '= origin destination'");
          raw.t.od = {e.value[0].text, e.value[1].text};
        } else if (key == "v_max") {
          expect_key_arity(e, 1);
          raw.t.v_max = money_value(e);
        } else if (key == "v_min") {
          expect_key_arity(e, 1);
          raw.t.v_min = money_value(e);
        } else if (key == "phi") {
          expect_key_arity(e, 2);
          raw.t.inconvenience[e.key[1].text] = money_value(e);
        } else {
          throw ParseError(e.line, e.key[0].column, "unknown traveler key '" + key + "'");
        }
      }
      for (const char* required : {"od", "v_max", "v_min"}) {
        if (!raw.seen.contains(required)) issues.push_back({"traveler", s.id, std::string("missing ") + required});
      }
      travelers.push_back(std::move(raw));
    } else if (s.kind == "vehicle") {
      needs_id();
      RawVehicle raw{s.line, {}, {}};
      raw.v.id = s.id;
      for (const auto& e : s.entries) {
        const std::string& key = e.key[0].text;
        std::string slot = key == "share" && e.key.size() == 2 ? "share " + e.key[1].text : key;
        if (!raw.seen.insert(slot).second) issues.push_back({"vehicle", s.id, "duplicate key '" + slot + "'"});
        if (key == "route") {
          expect_key_arity(e, 1);
          raw.v.route.edges = texts(e.value);
        } else if (key == "capacity") {
          expect_key_arity(e, 1);
          const std::string value = single_value(e);
          if (value.empty() || !std::all_of(value.begin(), value.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
              value.size() > 9) {
            throw ParseError(e.line, e.value[0].column, "capacity must be a positive integer");
          }
          raw.v.capacity = std::stoi(value);
        } else if (key == "operating_cost") {
          expect_key_arity(e, 1);
          raw.v.operating_cost = money_value(e);
        } else if (key == "share") {
          expect_key_arity(e, 2);
          if (!raw.v.cost_shares) raw.v.cost_shares.emplace();
          (*raw.v.cost_shares)[e.key[1].text] = money_value(e);
        } else {
          throw ParseError(e.line, e.key[0].column, "unknown vehicle key '" + key + "'");
        }
      }
      for (const char* required : {"route", "capacity", "operating_cost"}) {
        if (!raw.seen.contains(required)) issues.push_back({"vehicle", s.id, std::string("missing ") + required});
      }
      vehicles.push_back(std::move(raw));
    } else if (s.kind == "assignment") {
      needs_no_id();
      have_assignment = true;
      for (const auto& e : s.entries) {
        expect_key_arity(e, 1);
        single_value(e);
        assignment_entries.push_back(&e);
      }
    } else if (s.kind == "payments") {
      needs_no_id();
      have_payments = true;
      for (const auto& e : s.entries) {
        expect_key_arity(e, 2);
        money_value(e);
        payment_entries.push_back(&e);
      }
    } else {
      throw ParseError(s.line, 1, "unknown section [" + s.kind + "]");
    }
  }

  if (schema == -1) issues.push_back({"document", "", "missing schema_version"});
  else if (schema != kSchemaVersion) {
    issues.push_back({"document", "", "unsupported schema_version " + std::to_string(schema)});
  }
  if (!have_network) issues.push_back({"network", "", "missing [network] section"});
  if (!issues.empty()) throw ValidationError(std::move(issues));

  std::optional<Network> network;
  try {
    network.emplace(std::move(vertices), std::move(edges));
  } catch (const ValidationError& e) {
    throw;
  }
  std::vector<Traveler> ts;
  for (auto& raw : travelers) ts.push_back(std::move(raw.t));
  std::vector<Vehicle> vs;
  for (auto& raw : vehicles) vs.push_back(std::move(raw.v));
  MarketInstance inst(std::move(*network), std::move(ts), std::move(vs), mode);

  InstanceDocument doc{schema, std::move(inst), objective, std::nullopt, std::nullopt};
  const MarketInstance& market = doc.instance;

  if (have_assignment) {
    Assignment a(market.traveler_count());
    std::set<std::string> seen;
    for (const Entry* e : assignment_entries) {
      const std::string& tid = e->key[0].text;
      auto i = market.traveler_index(tid);
      if (!i) {
        issues.push_back({"assignment", tid, "unknown traveler"});
        continue;
      }
      if (!seen.insert(tid).second) issues.push_back({"assignment", tid, "traveler listed twice"});
      const std::string& vid = e->value[0].text;
      if (vid == "-") continue;
      auto j = market.vehicle_index(vid);
      if (!j) {
        issues.push_back({"assignment", tid, "unknown vehicle '" + vid + "'"});
        continue;
      }
      a.assign(*i, *j);
    }
    if (issues.empty()) {
      try {
        validate_assignment(market, a);
      } catch (const ValidationError& e) {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
      }
    }
    doc.assignment = a;
  }

  if (have_payments) {
    PaymentSchedule t(market.traveler_count(), market.vehicle_count());
    for (const Entry* e : payment_entries) {
      const std::string pair = e->key[0].text + " " + e->key[1].text;
      auto i = market.traveler_index(e->key[0].text);
      auto j = market.vehicle_index(e->key[1].text);
      if (!i || !j) {
        issues.push_back({"payments", pair, "unknown traveler or vehicle"});
        continue;
      }
      if (!market.compatible(*i, *j)) {
        issues.push_back({"payments", pair, "payment given for incompatible pair"});
        continue;
      }
      if (t.has(*i, *j)) issues.push_back({"payments", pair, "pair listed twice"});
      Money value = money_value(*e);
      if (value < 0) issues.push_back({"payments", pair, "payment must be nonnegative"});
      t.at(*i, *j) = value;
    }
    doc.payments = std::move(t);
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return doc;
}

MarketInstance parse_instance(std::string_view text) { return parse_instance_document(text).instance; }

std::string serialize_instance(const InstanceDocument& doc) {
  const MarketInstance& inst = doc.instance;
  std::ostringstream out;
  out << "schema_version = " << doc.schema_version << "\n\n";
  out << "[options]\n";
  out << "cost_share_mode = " << to_string(inst.cost_share_mode()) << "\n";
  out << "objective = " << to_string(doc.objective) << "\n\n";

  out << "[network]\n";
  out << "vertices =";
  for (const auto& v : inst.network().vertices()) out << ' ' << v;
  out << "\n";
  for (const auto& e : inst.network().edges()) out << "edge " << e.id << " = " << e.tail << ' ' << e.head << "\n";

  for (const auto& t : inst.travelers()) {
    out << "\n[traveler " << t.id << "]\n";
    out << "od = " << t.od.origin << ' ' << t.od.destination << "\n";
    out << "v_max = " << format_money(t.v_max) << "\n";
    out << "v_min = " << format_money(t.v_min) << "\n";
    for (const auto& [vid, phi] : t.inconvenience) out << "phi " << vid << " = " << format_money(phi) << "\n";
  }
  for (const auto& v : inst.vehicles()) {
    out << "\n[vehicle " << v.id << "]\n";
    out << "route =";
    for (const auto& e : v.route.edges) out << ' ' << e;
    out << "\n";
    out << "capacity = " << v.capacity << "\n";
    out << "operating_cost = " << format_money(v.operating_cost) << "\n";
    if (v.cost_shares) {
      for (const auto& [tid, share] : *v.cost_shares) out << "share " << tid << " = " << format_money(share) << "\n";
    }
  }
  if (doc.assignment) {
    out << "\n[assignment]\n";
    for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
      auto j = doc.assignment->vehicle_of(i);
      out << inst.travelers()[i].id << " = " << (j ? inst.vehicles()[*j].id : std::string("-")) << "\n";
    }
  }
  if (doc.payments) {
    out << "\n[payments]\n";
    for (std::size_t i = 0; i < inst.traveler_count(); ++i) {
      for (std::size_t j = 0; j < inst.vehicle_count(); ++j) {
        if (doc.payments->has(i, j)) {
          out << inst.travelers()[i].id << ' ' << inst.vehicles()[j].id << " = "
              << format_money(*doc.payments->at(i, j)) << "\n";
        }
      }
    }
  }
  return out.str();
}

std::string serialize_instance(const MarketInstance& inst) {
  return serialize_instance(InstanceDocument{kSchemaVersion, inst, Objective::surplus, std::nullopt, std::nullopt});
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <class Lookup, class Ids>
std::optional<std::size_t> resolve(const std::string& name, Lookup exact, const Ids& ids) {
  if (auto k = exact(name)) return k;
  std::optional<std::size_t> found;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (lower(ids[k]) == lower(name)) {
      if (found) return std::nullopt;
      found = k;
    }
  }
  return found;
}

}  // namespace

void apply_payment_overrides(const MarketInstance& inst, const Assignment& a, PaymentSchedule& payments,
                             std::string_view overrides) {
  std::vector<std::string> traveler_ids, vehicle_ids;
  for (const auto& t : inst.travelers()) traveler_ids.push_back(t.id);
  for (const auto& v : inst.vehicles()) vehicle_ids.push_back(v.id);

  std::vector<ValidationIssue> issues;
  std::size_t pos = 0;
  while (pos <= overrides.size()) {
    std::size_t comma = overrides.find(',', pos);
    if (comma == std::string_view::npos) comma = overrides.size();
    std::string item(overrides.substr(pos, comma - pos));
    pos = comma + 1;
    item.erase(std::remove_if(item.begin(), item.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
               item.end());
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string::npos) {
        issues.push_back({"payments", item, "override must look like ID=VALUE or ID@VEHICLE=VALUE"});
      } else {
        std::string who = item.substr(0, eq);
        std::string vehicle_name;
        if (auto at = who.find('@'); at != std::string::npos) {
          vehicle_name = who.substr(at + 1);
          who = who.substr(0, at);
        }
        auto i = resolve(who, [&](const std::string& id) { return inst.traveler_index(id); }, traveler_ids);
        std::optional<std::size_t> j;
        if (!i) {
          issues.push_back({"payments", who, "unknown traveler"});
        } else if (!vehicle_name.empty()) {
          j = resolve(vehicle_name, [&](const std::string& id) { return inst.vehicle_index(id); }, vehicle_ids);
          if (!j) issues.push_back({"payments", vehicle_name, "unknown vehicle"});
        } else {
          j = a.vehicle_of(*i);
          if (!j) issues.push_back({"payments", who, "traveler is unassigned; name the vehicle as ID@VEHICLE"});
        }
        if (i && j) {
          if (!inst.compatible(*i, *j)) {
            issues.push_back({"payments", who + "@" + inst.vehicles()[*j].id, "pair is not compatible"});
          } else {
            try {
              Money value = parse_money(item.substr(eq + 1));
              if (value < 0) throw std::invalid_argument("negative payment");
              payments.at(*i, *j) = value;
            } catch (const std::invalid_argument& err) {
              issues.push_back({"payments", who, err.what()});
            }
          }
        }
      }
    }
    if (comma == overrides.size()) break;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace mobmarket
