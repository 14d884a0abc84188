#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <opcouple/errors.hpp>

namespace opcouple {

// Exact rational scalar backed by GMP.
//
// Values are kept canonical at all times: gcd(|num|, den) = 1, den >= 1,
// and zero is represented as 0/1. mpq arithmetic and comparison assume
// canonical operands, so every construction path canonicalizes.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(int n) : value_(n) {}        // NOLINT: implicit by design
  Rational(long n) : value_(n) {}       // NOLINT
  Rational(long long n) : value_(static_cast<long>(n)) {}  // NOLINT
  Rational(long num, long den) : value_(num, den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    value_.canonicalize();
  }
  explicit Rational(mpz_class n) : value_(std::move(n)) {}
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  // Accepts "p" or "p/q" with decimal integers.
  static Rational from_string(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational literal");
    for (char c : text) {
      if (c != '-' && c != '/' && (c < '0' || c > '9'))
        throw ParseError("bad rational literal: " + std::string(text));
    }
    mpq_class q;
    if (q.set_str(std::string(text), 10) != 0)
      throw ParseError("bad rational literal: " + std::string(text));
    if (q.get_den() == 0) throw ParseError("rational with zero denominator: " + std::string(text));
    q.canonicalize();
    return Rational(raw_tag{}, std::move(q));
  }

  const mpz_class& num() const { return value_.get_num(); }
  const mpz_class& den() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  int sign() const { return sgn(value_); }

  bool is_integer() const { return value_.get_den() == 1; }

  // "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_str();
  }

  Rational operator-() const { return Rational(raw_tag{}, mpq_class(-value_)); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw SingularMatrix("division by zero rational");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(raw_tag{}, mpq_class(a.value_ + b.value_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(raw_tag{}, mpq_class(a.value_ - b.value_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(raw_tag{}, mpq_class(a.value_ * b.value_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw SingularMatrix("division by zero rational");
    return Rational(raw_tag{}, mpq_class(a.value_ / b.value_));
  }

  Rational reciprocal() const {
    if (is_zero()) throw SingularMatrix("reciprocal of zero");
    return Rational(raw_tag{}, mpq_class(1 / value_));
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  struct raw_tag {};
  // Bypasses canonicalization; only for results of mpq arithmetic on
  // already-canonical operands.
  Rational(raw_tag, mpq_class v) : value_(std::move(v)) {}

  mpq_class value_;
};

}  // namespace opcouple
