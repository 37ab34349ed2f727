#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mobmarket {

/// Exact rational money. Every price, valuation and profit in the library is
/// one of these; conversion to floating point happens only for display.
/// Values built from a numerator and denominator must be canonicalized
/// before comparison, as with any mpq_class.
using Money = mpq_class;

/// Parses "p/q", "p" or a base-10 decimal such as "-12.375" exactly.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Money parse_money(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" in lowest terms otherwise.
std::string format_money(const Money& value);

double to_double(const Money& value);

}  // namespace mobmarket
