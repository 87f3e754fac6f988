#include "mintb/rational.hpp"

#include <cctype>
#include <ostream>

namespace mintb {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational Rational::from_string(std::string_view text) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  std::string_view num_part = rest;
  std::string_view den_part;
  if (auto slash = rest.find('/'); slash != std::string_view::npos) {
    num_part = rest.substr(0, slash);
    den_part = rest.substr(slash + 1);
    if (!all_digits(den_part)) throw parse_error("bad rational literal: '" + std::string(text) + "'");
  }
  if (!all_digits(num_part)) throw parse_error("bad rational literal: '" + std::string(text) + "'");
  BigInt num{std::string(num_part)};
  BigInt den = den_part.empty() ? BigInt(1) : BigInt(std::string(den_part));
  if (den == 0) throw parse_error("bad rational literal (zero denominator): '" + std::string(text) + "'");
  if (negative) num = -num;
  return Rational(num, den);
}

std::string Rational::str() const {
  std::string out = num().str();
  if (!is_integer()) {
    out += '/';
    out += den().str();
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::string ExtCost::str() const { return inf_ ? "inf" : finite_.str(); }

std::ostream& operator<<(std::ostream& os, const ExtCost& c) { return os << c.str(); }

}  // namespace mintb
