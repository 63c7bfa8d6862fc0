#include "evoform/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace evoform {

Polynomial Polynomial::constant(std::size_t nvars, const Number& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[i] = 1;
  p.add_term(m, Number(1));
  return p;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
  return d;
}

void Polynomial::add_term(const Monomial& m, const Number& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Polynomial::Monomial m(a.nvars_);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::scaled(const Number& c) const {
  Polynomial out(nvars_);
  for (const auto& [m, v] : terms_) out.add_term(m, v * c);
  return out;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial result = constant(nvars_, Number(1));
  for (int i = 0; i < k; ++i) result = result * *this;
  return result;
}

Expr Polynomial::to_expr(std::span<const Expr> vars) const {
  std::vector<Expr> terms;
  for (const auto& [m, c] : terms_) {
    std::vector<Expr> factors{Expr(c)};
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) factors.push_back(Expr::pow(vars[i], m[i]));
    }
    terms.push_back(Expr::mul(std::move(factors)));
  }
  return Expr::add(std::move(terms));
}

std::optional<Polynomial> to_polynomial(const Expr& e, std::size_t nvars) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return Polynomial::constant(nvars, e.number());
    case Expr::Kind::Symbol:
      if (e.symbol_index() < 0 || static_cast<std::size_t>(e.symbol_index()) >= nvars) return std::nullopt;
      return Polynomial::variable(nvars, static_cast<std::size_t>(e.symbol_index()));
    case Expr::Kind::Sum: {
      Polynomial acc(nvars);
      for (const Expr& t : e.args()) {
        auto p = to_polynomial(t, nvars);
        if (!p) return std::nullopt;
        acc += *p;
      }
      return acc;
    }
    case Expr::Kind::Product: {
      Polynomial acc = Polynomial::constant(nvars, Number(1));
      for (const Expr& f : e.args()) {
        auto p = to_polynomial(f, nvars);
        if (!p) return std::nullopt;
        acc = acc * *p;
      }
      return acc;
    }
    case Expr::Kind::Power: {
      if (e.exponent() < 0) return std::nullopt;
      auto p = to_polynomial(e.args()[0], nvars);
      if (!p) return std::nullopt;
      return p->pow(e.exponent());
    }
    case Expr::Kind::Negate: {
      auto p = to_polynomial(e.args()[0], nvars);
      if (!p) return std::nullopt;
      return p->scaled(Number(-1));
    }
    case Expr::Kind::Function: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace evoform
