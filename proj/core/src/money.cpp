#include "mobmarket/money.hpp"

#include <cctype>
#include <stdexcept>

namespace mobmarket {
namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
}

}  // namespace

Money parse_money(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) malformed(text);

  Money result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) malformed(text);
    mpz_class q(std::string(den), 10);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Money(mpz_class(std::string(num), 10), q);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) malformed(text);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac))) {
      malformed(text);
    }
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    result = Money(mpz_class(digits.empty() ? "0" : digits, 10), scale);
  } else {
    if (!is_digits(body)) malformed(text);
    result = Money(mpz_class(std::string(body), 10));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string format_money(const Money& value) {
  Money v = value;
  v.canonicalize();
  return v.get_str(10);
}

double to_double(const Money& value) { return value.get_d(); }

}  // namespace mobmarket
