#include "evoform/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "evoform/error.hpp"

namespace evoform {

struct Expr::Node {
  Kind kind = Kind::Constant;
  Number number;
  int index = -1;
  std::string name;
  int exponent = 0;
  Func func = Func::Sin;
  std::vector<Expr> args;
  std::size_t size = 1;
  int max_index = -1;
};

namespace {

using Node = Expr::Node;

std::shared_ptr<Node> make_node(Expr::Kind kind, std::vector<Expr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  for (const Expr& a : n->args) {
    n->size += a.size();
    n->max_index = std::max(n->max_index, a.max_symbol_index());
  }
  return n;
}

const Expr& zero_expr() {
  static const Expr z{Number(0)};
  return z;
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}

Expr::Expr(Number n) {
  auto node = make_node(Kind::Constant);
  node->number = n;
  node_ = std::move(node);
}

Expr Expr::symbol(int index, std::string name) {
  auto node = make_node(Kind::Symbol);
  node->index = index;
  node->name = std::move(name);
  node->max_index = index;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::raw_sum(std::vector<Expr> terms) { return Expr(make_node(Kind::Sum, std::move(terms))); }

Expr Expr::raw_product(std::vector<Expr> factors) {
  return Expr(make_node(Kind::Product, std::move(factors)));
}

Expr Expr::raw_power(Expr base, int exponent) {
  auto node = make_node(Kind::Power, {std::move(base)});
  node->exponent = exponent;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::raw_negate(Expr arg) { return Expr(make_node(Kind::Negate, {std::move(arg)})); }

Expr Expr::raw_function(Func f, Expr arg) {
  auto node = make_node(Kind::Function, {std::move(arg)});
  node->func = f;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Number& Expr::number() const { return node_->number; }
int Expr::symbol_index() const { return node_->index; }
const std::string& Expr::symbol_name() const { return node_->name; }
int Expr::exponent() const { return node_->exponent; }
Expr::Func Expr::func() const { return node_->func; }
std::span<const Expr> Expr::args() const { return node_->args; }
int Expr::max_symbol_index() const { return node_->max_index; }
std::size_t Expr::size() const { return node_->size; }

bool Expr::is_zero() const { return kind() == Kind::Constant && number().is_zero(); }
bool Expr::is_one() const { return kind() == Kind::Constant && number().is_one(); }

std::string_view function_name(Expr::Func f) {
  switch (f) {
    case Expr::Func::Sin: return "sin";
    case Expr::Func::Cos: return "cos";
    case Expr::Func::Exp: return "exp";
    case Expr::Func::Ln: return "ln";
    case Expr::Func::Sqrt: return "sqrt";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Ordering

int compare(const Expr& a, const Expr& b) {
  if (&a == &b) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Expr::Kind::Constant: {
      auto c = compare(a.number(), b.number());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Expr::Kind::Symbol:
      if (a.symbol_index() != b.symbol_index()) return a.symbol_index() < b.symbol_index() ? -1 : 1;
      return a.symbol_name().compare(b.symbol_name()) < 0   ? -1
             : a.symbol_name().compare(b.symbol_name()) > 0 ? 1
                                                            : 0;
    case Expr::Kind::Power:
      if (int c = compare(a.args()[0], b.args()[0]); c != 0) return c;
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      return 0;
    case Expr::Kind::Function:
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      return compare(a.args()[0], b.args()[0]);
    default: {
      auto aa = a.args();
      auto bb = b.args();
      std::size_t n = std::min(aa.size(), bb.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(aa[i], bb[i]); c != 0) return c;
      }
      if (aa.size() != bb.size()) return aa.size() < bb.size() ? -1 : 1;
      return 0;
    }
  }
}

// ---------------------------------------------------------------------------
// Normalizing factories

namespace {

// Splits a normalized term into (numeric coefficient, remainder).
std::pair<Number, Expr> split_coefficient(const Expr& term) {
  if (term.kind() == Expr::Kind::Product && !term.args().empty() && term.args()[0].is_constant()) {
    auto args = term.args();
    if (args.size() == 2) return {args[0].number(), args[1]};
    return {args[0].number(), Expr::raw_product({args.begin() + 1, args.end()})};
  }
  return {Number(1), term};
}

Expr scale(const Number& c, const Expr& rest) {
  if (c.is_one()) return rest;
  std::vector<Expr> factors{Expr(c)};
  if (rest.kind() == Expr::Kind::Product) {
    factors.insert(factors.end(), rest.args().begin(), rest.args().end());
  } else {
    factors.push_back(rest);
  }
  return Expr::raw_product(std::move(factors));
}

bool is_perfect_square(std::int64_t v, std::int64_t& root) {
  if (v < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c) {
    if (c * c == v) {
      root = c;
      return true;
    }
  }
  return false;
}

double apply_double(Expr::Func f, double v) {
  switch (f) {
    case Expr::Func::Sin: return std::sin(v);
    case Expr::Func::Cos: return std::cos(v);
    case Expr::Func::Exp: return std::exp(v);
    case Expr::Func::Ln:
      if (!(v > 0.0)) throw DomainError("ln of nonpositive value");
      return std::log(v);
    case Expr::Func::Sqrt:
      if (v < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(v);
  }
  return 0.0;
}

}  // namespace

Expr Expr::add(std::vector<Expr> terms) {
  Number constant(0);
  std::map<Expr, Number, ExprLess> collected;
  auto absorb = [&](auto&& self, const Expr& t) -> void {
    switch (t.kind()) {
      case Kind::Constant: constant = constant + t.number(); break;
      case Kind::Sum:
        for (const Expr& a : t.args()) self(self, a);
        break;
      case Kind::Negate: self(self, mul({Expr(-1), t.args()[0]})); break;
      default: {
        auto [c, rest] = split_coefficient(t);
        auto [it, inserted] = collected.try_emplace(rest, c);
        if (!inserted) it->second = it->second + c;
      }
    }
  };
  for (const Expr& t : terms) absorb(absorb, t);

  std::vector<Expr> out;
  for (const auto& [rest, c] : collected) {
    if (!c.is_zero()) out.push_back(scale(c, rest));
  }
  if (!constant.is_zero()) out.emplace_back(constant);
  if (out.empty()) return Expr();
  if (out.size() == 1) return out.front();
  return raw_sum(std::move(out));
}

Expr Expr::mul(std::vector<Expr> factors) {
  Number constant(1);
  std::map<Expr, int, ExprLess> powers;
  auto absorb = [&](auto&& self, const Expr& f) -> void {
    switch (f.kind()) {
      case Kind::Constant: constant = constant * f.number(); break;
      case Kind::Product:
        for (const Expr& a : f.args()) self(self, a);
        break;
      case Kind::Negate:
        constant = -constant;
        self(self, f.args()[0]);
        break;
      case Kind::Power: {
        const Expr& base = f.args()[0];
        if (base.is_constant()) {
          try {
            constant = constant * base.number().pow(f.exponent());
          } catch (const DomainError&) {
            powers[base] += f.exponent();
          }
        } else {
          powers[base] += f.exponent();
        }
        break;
      }
      default: powers[f] += 1;
    }
  };
  for (const Expr& f : factors) absorb(absorb, f);
  if (constant.is_zero()) return Expr();

  // sqrt(a)^(2q+r) -> a^q * sqrt(a)^r
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& [base, k] : powers) {
      if (base.kind() == Kind::Function && base.func() == Func::Sqrt && std::abs(k) >= 2) {
        int q = k / 2;
        k -= 2 * q;
        Expr inner = base.args()[0];
        if (inner.kind() == Kind::Power) {
          powers[inner.args()[0]] += inner.exponent() * q;
        } else {
          powers[inner] += q;
        }
        changed = true;
        break;
      }
    }
  }

  std::vector<Expr> out;
  for (const auto& [base, k] : powers) {
    if (k == 0) continue;
    if (base.is_constant()) {
      try {
        constant = constant * base.number().pow(k);
        continue;
      } catch (const DomainError&) {
      }
    }
    out.push_back(k == 1 ? base : raw_power(base, k));
  }
  if (constant.is_zero()) return Expr();
  if (out.empty()) return Expr(constant);
  if (constant.is_one() && out.size() == 1) return out.front();
  if (!constant.is_one()) out.insert(out.begin(), Expr(constant));
  return raw_product(std::move(out));
}

Expr Expr::pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  switch (base.kind()) {
    case Kind::Constant:
      try {
        return Expr(base.number().pow(exponent));
      } catch (const DomainError&) {
        return raw_power(base, exponent);
      }
    case Kind::Power: return pow(base.args()[0], base.exponent() * exponent);
    case Kind::Product: {
      std::vector<Expr> parts;
      for (const Expr& f : base.args()) parts.push_back(pow(f, exponent));
      return mul(std::move(parts));
    }
    case Kind::Negate: return pow(mul({Expr(-1), base.args()[0]}), exponent);
    case Kind::Function:
      if (base.func() == Func::Sqrt) return mul({raw_power(base, exponent)});
      return raw_power(base, exponent);
    default: return raw_power(base, exponent);
  }
}

Expr Expr::apply(Func f, const Expr& arg) {
  if (arg.is_constant()) {
    const Number& v = arg.number();
    if (v.exact()) {
      if (v.is_zero() && (f == Func::Sin)) return Expr(0);
      if (v.is_zero() && (f == Func::Cos || f == Func::Exp)) return Expr(1);
      if (v.is_one() && f == Func::Ln) return Expr(0);
      std::int64_t rn = 0, rd = 0;
      if (f == Func::Sqrt && is_perfect_square(v.numerator(), rn) && is_perfect_square(v.denominator(), rd)) {
        return Expr(Number::rational(rn, rd));
      }
      return raw_function(f, arg);
    }
    try {
      double r = apply_double(f, v.value());
      if (std::isfinite(r)) return real(r);
    } catch (const DomainError&) {
    }
    return raw_function(f, arg);
  }
  if (f == Func::Ln && arg.kind() == Kind::Function && arg.func() == Func::Exp) return arg.args()[0];
  return raw_function(f, arg);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, Expr::mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::mul({a, Expr::pow(b, -1)}); }
Expr operator-(const Expr& a) { return Expr::mul({Expr(-1), a}); }

// ---------------------------------------------------------------------------
// Calculus and evaluation

Expr differentiate(const Expr& e, int index) {
  if (e.max_symbol_index() < index) return Expr();
  switch (e.kind()) {
    case Expr::Kind::Constant: return Expr();
    case Expr::Kind::Symbol: return Expr(e.symbol_index() == index ? 1 : 0);
    case Expr::Kind::Sum: {
      std::vector<Expr> parts;
      for (const Expr& t : e.args()) parts.push_back(differentiate(t, index));
      return Expr::add(std::move(parts));
    }
    case Expr::Kind::Product: {
      auto factors = e.args();
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        Expr di = differentiate(factors[i], index);
        if (di.is_zero()) continue;
        std::vector<Expr> term(factors.begin(), factors.end());
        term[i] = di;
        parts.push_back(Expr::mul(std::move(term)));
      }
      return Expr::add(std::move(parts));
    }
    case Expr::Kind::Power: {
      const Expr& base = e.args()[0];
      Expr db = differentiate(base, index);
      if (db.is_zero()) return Expr();
      int k = e.exponent();
      return Expr::mul({Expr(k), Expr::pow(base, k - 1), db});
    }
    case Expr::Kind::Negate: return -differentiate(e.args()[0], index);
    case Expr::Kind::Function: {
      const Expr& a = e.args()[0];
      Expr da = differentiate(a, index);
      if (da.is_zero()) return Expr();
      switch (e.func()) {
        case Expr::Func::Sin: return cos(a) * da;
        case Expr::Func::Cos: return -(sin(a) * da);
        case Expr::Func::Exp: return e * da;
        case Expr::Func::Ln: return da / a;
        case Expr::Func::Sqrt: return Expr::mul({Expr(Number::rational(1, 2)), da, Expr::pow(e, -1)});
      }
    }
  }
  return Expr();
}

namespace {

bool find_symbol_index(const Expr& e, std::string_view name, int& index) {
  if (e.kind() == Expr::Kind::Symbol) {
    if (e.symbol_name() == name) {
      index = e.symbol_index();
      return true;
    }
    return false;
  }
  for (const Expr& a : e.args()) {
    if (find_symbol_index(a, name, index)) return true;
  }
  return false;
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view name) {
  int index = -1;
  if (!find_symbol_index(e, name, index)) return Expr();
  return differentiate(e, index);
}

double evaluate(const Expr& e, std::span<const double> point) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return e.number().value();
    case Expr::Kind::Symbol: {
      auto i = static_cast<std::size_t>(e.symbol_index());
      if (e.symbol_index() < 0 || i >= point.size()) {
        throw UnboundSymbolError("unbound symbol '" + e.symbol_name() + "'");
      }
      return point[i];
    }
    case Expr::Kind::Sum: {
      double s = 0.0;
      for (const Expr& t : e.args()) s += evaluate(t, point);
      return s;
    }
    case Expr::Kind::Product: {
      double p = 1.0;
      for (const Expr& f : e.args()) p *= evaluate(f, point);
      return p;
    }
    case Expr::Kind::Power: {
      double b = evaluate(e.args()[0], point);
      int k = e.exponent();
      if (k < 0 && b == 0.0) throw DomainError("division by zero");
      return std::pow(b, k);
    }
    case Expr::Kind::Negate: return -evaluate(e.args()[0], point);
    case Expr::Kind::Function: return apply_double(e.func(), evaluate(e.args()[0], point));
  }
  return 0.0;
}

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Symbol: return e;
    case Expr::Kind::Sum: {
      std::vector<Expr> parts;
      for (const Expr& t : e.args()) parts.push_back(simplify(t));
      return Expr::add(std::move(parts));
    }
    case Expr::Kind::Product: {
      std::vector<Expr> parts;
      for (const Expr& f : e.args()) parts.push_back(simplify(f));
      return Expr::mul(std::move(parts));
    }
    case Expr::Kind::Power: return Expr::pow(simplify(e.args()[0]), e.exponent());
    case Expr::Kind::Negate: return -simplify(e.args()[0]);
    case Expr::Kind::Function: return Expr::apply(e.func(), simplify(e.args()[0]));
  }
  return e;
}

Expr substitute(const Expr& e, std::span<const Expr> values) {
  if (e.max_symbol_index() < 0) return e;
  switch (e.kind()) {
    case Expr::Kind::Constant: return e;
    case Expr::Kind::Symbol: {
      auto i = static_cast<std::size_t>(e.symbol_index());
      return i < values.size() ? values[i] : e;
    }
    case Expr::Kind::Sum: {
      std::vector<Expr> parts;
      for (const Expr& t : e.args()) parts.push_back(substitute(t, values));
      return Expr::add(std::move(parts));
    }
    case Expr::Kind::Product: {
      std::vector<Expr> parts;
      for (const Expr& f : e.args()) parts.push_back(substitute(f, values));
      return Expr::mul(std::move(parts));
    }
    case Expr::Kind::Power: return Expr::pow(substitute(e.args()[0], values), e.exponent());
    case Expr::Kind::Negate: return -substitute(e.args()[0], values);
    case Expr::Kind::Function: return Expr::apply(e.func(), substitute(e.args()[0], values));
  }
  return e;
}

}  // namespace evoform
