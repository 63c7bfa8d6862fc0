#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "evoform/expr.hpp"

namespace evoform {

/// Sparse multivariate polynomial with Number coefficients; exponent vectors
/// have one entry per variable.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(std::size_t nvars, const Number& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<Monomial, Number>& terms() const noexcept { return terms_; }
  int total_degree() const;

  Polynomial& operator+=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Number& c) const;
  Polynomial pow(int k) const;

  /// Rebuilds an expression with variable i replaced by vars[i].
  Expr to_expr(std::span<const Expr> vars) const;

 private:
  void add_term(const Monomial& m, const Number& c);
  std::size_t nvars_;
  std::map<Monomial, Number> terms_;
};

/// Expands `e` into a polynomial over symbols 0..nvars-1, or nullopt when
/// `e` contains functions, negative powers or out-of-range symbols.
std::optional<Polynomial> to_polynomial(const Expr& e, std::size_t nvars);

}  // namespace evoform
