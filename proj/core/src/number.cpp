#include "evoform/number.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "evoform/error.hpp"

namespace evoform {

namespace {

__extension__ typedef __int128 Wide;

bool fits(Wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() + 1 &&
         v <= std::numeric_limits<std::int64_t>::max();
}

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Reduces num/den; falls back to a double when the result does not fit.
Number make_reduced(Wide num, Wide den) {
  if (den == 0) throw DomainError("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (fits(num) && fits(den)) {
    return Number::rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  }
  return Number::real(static_cast<double>(num) / static_cast<double>(den));
}

}  // namespace

Number Number::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  Number n;
  n.num_ = g > 1 ? num / g : num;
  n.den_ = g > 1 ? den / g : den;
  return n;
}

Number Number::real(double v) {
  Number n;
  n.exact_ = false;
  n.real_ = v;
  return n;
}

double Number::value() const noexcept {
  if (!exact_) return real_;
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Number Number::operator-() const {
  if (!exact_) return real(-real_);
  return rational(-num_, den_);
}

Number Number::pow(int exponent) const {
  if (!exact_) return real(std::pow(real_, exponent));
  if (exponent < 0) {
    if (num_ == 0) throw DomainError("division by zero");
    return Number(1) / pow(-exponent);
  }
  Number result(1);
  Number base = *this;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return result;
}

Number operator+(const Number& a, const Number& b) {
  if (!a.exact_ || !b.exact_) return Number::real(a.value() + b.value());
  return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
  if (!a.exact_ || !b.exact_) return Number::real(a.value() * b.value());
  return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (!a.exact_ || !b.exact_) return Number::real(a.value() / b.value());
  return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering compare(const Number& a, const Number& b) {
  if (a.exact_ != b.exact_) return a.exact_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.exact_) {
    Wide lhs = Wide(a.num_) * b.den_;
    Wide rhs = Wide(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  // NaN never appears in folded constants; treat it as equal to itself.
  if (a.real_ < b.real_) return std::strong_ordering::less;
  if (a.real_ > b.real_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Number::str() const {
  if (exact_) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", real_);
  std::string s(buf);
  // Keep a visible marker of inexactness so the text re-parses as a real.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Number Number::recognize(double v, std::int64_t max_den, double tol) {
  if (!std::isfinite(v)) return real(v);
  // Continued-fraction convergents.
  double x = v;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 40; ++iter) {
    double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t p2 = ai * p1 + p0;
    std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(static_cast<double>(p2) / static_cast<double>(q2) - v) <= tol) return rational(p2, q2);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = x - a;
    if (frac < 1e-300) break;
    x = 1.0 / frac;
  }
  return real(v);
}

}  // namespace evoform
