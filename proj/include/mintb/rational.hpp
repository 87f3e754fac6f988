#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include "mintb/errors.hpp"

namespace mintb {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always kept in canonical form: gcd(num, den) == 1,
/// den > 0.  All game arithmetic runs on these; no floating point anywhere.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : v_(value) {}  // NOLINT: implicit by design, costs are written as ints
  Rational(int value) : v_(value) {}        // NOLINT
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw validation_error("rational with zero denominator");
    v_ = Rep(num);
    v_ /= Rep(den);  // cpp_rational division canonicalizes sign and gcd
  }

  /// Parses "p" or "p/q" with optional leading '-'.  No whitespace, no floats.
  static Rational from_string(std::string_view text);

  BigInt num() const { return numerator(v_); }
  BigInt den() const { return denominator(v_); }
  bool is_integer() const { return denominator(v_) == 1; }
  bool is_negative() const { return v_ < 0; }
  bool is_zero() const { return v_ == 0; }

  /// Canonical text form: "p" when the denominator is 1, else "p/q".
  std::string str() const;

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }
  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw validation_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  using Rep = boost::multiprecision::cpp_rational;
  Rep v_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Rational extended with a single +infinity element.  Infinity absorbs
/// addition and compares greater than every finite value.
class ExtCost {
 public:
  ExtCost() = default;  // finite zero
  ExtCost(Rational v) : finite_(std::move(v)) {}  // NOLINT: implicit lift
  ExtCost(long long v) : finite_(v) {}            // NOLINT
  ExtCost(int v) : finite_(v) {}                  // NOLINT

  static ExtCost infinity() {
    ExtCost c;
    c.inf_ = true;
    return c;
  }

  bool infinite() const { return inf_; }
  const Rational& value() const {
    if (inf_) throw internal_error("value() on infinite cost");
    return finite_;
  }
  std::string str() const;

  friend ExtCost operator+(const ExtCost& a, const ExtCost& b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtCost(a.finite_ + b.finite_);
  }

  friend bool operator==(const ExtCost& a, const ExtCost& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.finite_ == b.finite_;
  }
  friend bool operator!=(const ExtCost& a, const ExtCost& b) { return !(a == b); }
  friend bool operator<(const ExtCost& a, const ExtCost& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.finite_ < b.finite_;
  }
  friend bool operator<=(const ExtCost& a, const ExtCost& b) { return !(b < a); }
  friend bool operator>(const ExtCost& a, const ExtCost& b) { return b < a; }
  friend bool operator>=(const ExtCost& a, const ExtCost& b) { return !(a < b); }

 private:
  bool inf_ = false;
  Rational finite_;
};

std::ostream& operator<<(std::ostream& os, const ExtCost& c);

}  // namespace mintb
