#pragma once

#include "mobmarket/market.hpp"
#include "mobmarket/solver.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mobmarket {

/// Syntax error in an instance document, located by 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                           message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline constexpr int kSchemaVersion = 1;

/// Everything an instance file can carry: the market plus an optional fixed
/// assignment and payment schedule used by `check`.
struct InstanceDocument {
  int schema_version = kSchemaVersion;
  MarketInstance instance;
  Objective objective = Objective::surplus;
  std::optional<Assignment> assignment;
  std::optional<PaymentSchedule> payments;

  friend bool operator==(const InstanceDocument&, const InstanceDocument&) = default;
};

/// Throws ParseError for malformed lines or values and ValidationError
/// (aggregating every semantic problem) for a well-formed but invalid market.
InstanceDocument parse_instance_document(std::string_view text);
MarketInstance parse_instance(std::string_view text);

std::string serialize_instance(const InstanceDocument& doc);
std::string serialize_instance(const MarketInstance& inst);

/// Applies comma-separated payment overrides to `payments`:
///   TRAVELER=VALUE          payment on the traveler's matched pair
///   TRAVELER@VEHICLE=VALUE  payment on an explicit pair
/// Ids match exactly, or case-insensitively when that is unambiguous.
/// Throws ValidationError for unknown ids, unmatched travelers or incompatible pairs.
void apply_payment_overrides(const MarketInstance& inst, const Assignment& a, PaymentSchedule& payments,
                             std::string_view overrides);

}  // namespace mobmarket
