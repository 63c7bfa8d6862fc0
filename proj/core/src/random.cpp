#include "evoform/random.hpp"

#include <algorithm>
#include <vector>

namespace evoform {

int RandomInputs::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

double RandomInputs::uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

std::vector<Expr> RandomInputs::symbols(int n) const {
  auto names = default_coordinates(n);
  return coordinate_symbols(names);
}

Expr RandomInputs::polynomial(int nvars, int max_degree, int max_terms) {
  auto x = symbols(nvars);
  int count = uniform_int(1, max_terms);
  std::vector<Expr> terms;
  for (int t = 0; t < count; ++t) {
    std::vector<Expr> factors{Expr(uniform_int(-3, 3))};
    int degree = uniform_int(0, max_degree);
    for (int d = 0; d < degree; ++d) factors.push_back(x[static_cast<std::size_t>(uniform_int(0, nvars - 1))]);
    terms.push_back(Expr::mul(std::move(factors)));
  }
  return Expr::add(std::move(terms));
}

Expr RandomInputs::smooth(int nvars) {
  auto x = symbols(nvars);
  // Small linear argument keeps quadrature well resolved over the box.
  std::vector<Expr> lin;
  for (int i = 0; i < nvars; ++i) {
    int c = uniform_int(-2, 2);
    if (c != 0) lin.push_back(Expr(Number::rational(c, 4)) * x[static_cast<std::size_t>(i)]);
  }
  lin.push_back(Expr(Number::rational(uniform_int(-2, 2), 4)));
  Expr arg = Expr::add(std::move(lin));
  Expr f;
  switch (uniform_int(0, 2)) {
    case 0: f = sin(arg); break;
    case 1: f = cos(arg); break;
    default: f = exp(arg); break;
  }
  return f * polynomial(nvars, 1, 2) + polynomial(nvars, 2, 2);
}

DifferentialForm RandomInputs::polynomial_form(int dim, int degree, int max_degree) {
  DifferentialForm out(dim, degree);
  if (degree > dim) return out;
  std::vector<IndexTuple> basis;
  IndexTuple idx(static_cast<std::size_t>(degree));
  // Enumerate increasing tuples.
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == degree) {
      basis.push_back(idx);
      return;
    }
    for (int i = start; i < dim; ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  for (const IndexTuple& b : basis) {
    if (uniform_int(0, 3) == 0) continue;
    out.add_term(b, polynomial(dim, max_degree));
  }
  return out;
}

DifferentialForm RandomInputs::smooth_form(int dim, int degree) {
  DifferentialForm out = polynomial_form(dim, degree, 0);
  return out.map_coefficients([&](const Expr&) { return smooth(dim); });
}

ExprMatrix RandomInputs::positive_definite_metric(int dim, int max_degree) {
  ExprMatrix b(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      b(i, j) = uniform_int(0, 2) == 0 ? Expr() : Expr(Number::rational(1, 2)) * polynomial(dim, max_degree, 2);
    }
  }
  ExprMatrix g(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      std::vector<Expr> terms;
      if (i == j) terms.emplace_back(1);
      for (int k = 0; k < dim; ++k) terms.push_back(b(i, k) * b(j, k));
      g(i, j) = Expr::add(std::move(terms));
      g(j, i) = g(i, j);
    }
  }
  return g;
}

ExprMatrix RandomInputs::constant_metric(int dim) {
  std::vector<int> b(static_cast<std::size_t>(dim * dim));
  for (int& v : b) v = uniform_int(-1, 1);
  ExprMatrix g(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      int s = i == j ? 1 : 0;
      for (int k = 0; k < dim; ++k) s += b[static_cast<std::size_t>(i * dim + k)] * b[static_cast<std::size_t>(j * dim + k)];
      g(i, j) = Expr(s);
    }
  }
  return g;
}

VectorField RandomInputs::vector_field(int dim, int max_degree) {
  VectorField v;
  for (int i = 0; i < dim; ++i) v.components.push_back(polynomial(dim, max_degree));
  return v;
}

}  // namespace evoform
