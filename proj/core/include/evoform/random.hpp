#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "evoform/expr.hpp"
#include "evoform/form.hpp"
#include "evoform/geometry.hpp"

namespace evoform {

/// Seeded generators of test inputs over the default coordinate names.
class RandomInputs {
 public:
  explicit RandomInputs(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi);
  double uniform_real(double lo, double hi);

  /// Up to `max_terms` monomials of total degree <= max_degree with integer
  /// coefficients in [-3, 3]; may be zero.
  Expr polynomial(int nvars, int max_degree, int max_terms = 4);
  /// Polynomial times or inside one of sin, cos, exp, with small arguments.
  Expr smooth(int nvars);

  DifferentialForm polynomial_form(int dim, int degree, int max_degree = 3);
  DifferentialForm smooth_form(int dim, int degree);

  /// I + B B^T with B entries polynomials of degree <= max_degree.
  ExprMatrix positive_definite_metric(int dim, int max_degree = 1);
  /// I + B B^T with integer B.
  ExprMatrix constant_metric(int dim);

  VectorField vector_field(int dim, int max_degree = 2);

  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  std::vector<Expr> symbols(int n) const;
  std::mt19937_64 rng_;
};

}  // namespace evoform
