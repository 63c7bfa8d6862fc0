#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace evoform {

/// A numeric constant that stays an exact rational for as long as the
/// arithmetic allows, and degrades to a double on overflow or when mixed
/// with an inexact value.
class Number {
 public:
  constexpr Number() = default;
  constexpr Number(std::int64_t v) : num_(v) {}  // NOLINT(google-explicit-constructor)

  /// Exact num/den, reduced. Throws DomainError when den == 0.
  static Number rational(std::int64_t num, std::int64_t den);
  static Number real(double v);

  bool exact() const noexcept { return exact_; }
  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  bool is_integer() const noexcept { return exact_ && den_ == 1; }

  double value() const noexcept;

  bool is_zero() const noexcept { return exact_ ? num_ == 0 : real_ == 0.0; }
  bool is_one() const noexcept { return exact_ ? (num_ == 1 && den_ == 1) : real_ == 1.0; }
  bool is_negative() const noexcept { return exact_ ? num_ < 0 : real_ < 0.0; }

  Number operator-() const;
  Number pow(int exponent) const;

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator/(const Number& a, const Number& b);

  /// Total order: exact before inexact, then by value.
  friend std::strong_ordering compare(const Number& a, const Number& b);
  friend bool operator==(const Number& a, const Number& b) { return compare(a, b) == 0; }

  /// Text accepted back by the expression parser ("3", "3/4", "0.25").
  std::string str() const;

  /// Best small-denominator rational within `tol` of `v`, or an inexact value.
  static Number recognize(double v, std::int64_t max_den = 10000, double tol = 1e-12);

 private:
  bool exact_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double real_ = 0.0;
};

}  // namespace evoform
