#include <cctype>
#include <cstdlib>
#include <limits>
#include <string>

#include "evoform/error.hpp"
#include "evoform/expr.hpp"

namespace evoform {

namespace {

// Binding context of a subexpression, loosest first.
enum class Ctx { Top, Term, Factor, Base };

std::string print(const Expr& e, Ctx ctx);

std::string wrap(std::string s) { return "(" + s + ")"; }

std::string print_constant(const Number& n, Ctx ctx) {
  std::string s = n.str();
  bool negative = n.is_negative();
  bool fraction = n.exact() && n.denominator() != 1;
  if ((negative && ctx >= Ctx::Term) || (fraction && ctx >= Ctx::Factor)) return wrap(s);
  return s;
}

std::string print_product(const Expr& e, Ctx ctx) {
  auto args = e.args();
  std::size_t first = 0;
  Number c(1);
  if (!args.empty() && args[0].is_constant()) {
    c = args[0].number();
    first = 1;
  }
  bool negative = c.is_negative();
  if (negative) c = -c;

  std::vector<std::string> num;
  std::vector<std::string> den;
  if (c.exact()) {
    if (c.numerator() != 1) num.push_back(std::to_string(c.numerator()));
    if (c.denominator() != 1) den.push_back(std::to_string(c.denominator()));
  } else if (!c.is_one()) {
    num.push_back(c.str());
  }
  bool leading_power = false;
  for (std::size_t i = first; i < args.size(); ++i) {
    const Expr& f = args[i];
    if (f.kind() == Expr::Kind::Power && f.exponent() < 0) {
      std::string d = print(f.args()[0], Ctx::Base);
      if (f.exponent() != -1) d += "^" + std::to_string(-f.exponent());
      den.push_back(d);
      continue;
    }
    if (num.empty() && f.kind() == Expr::Kind::Power) leading_power = true;
    num.push_back(print(f, Ctx::Factor));
  }

  std::string text;
  if (num.empty()) {
    text = "1";
  } else {
    for (std::size_t i = 0; i < num.size(); ++i) text += (i ? "*" : "") + num[i];
  }
  for (const std::string& d : den) text += "/" + d;
  if (negative) {
    // Unary minus binds tighter than '^' in the grammar.
    text = (leading_power ? "-1*" : "-") + text;
    if (ctx >= Ctx::Term) return wrap(text);
  }
  if (ctx == Ctx::Base) return wrap(text);
  return text;
}

bool is_negative_term(const Expr& t) {
  if (t.is_constant()) return t.number().is_negative();
  if (t.kind() == Expr::Kind::Product && !t.args().empty() && t.args()[0].is_constant()) {
    return t.args()[0].number().is_negative();
  }
  return t.kind() == Expr::Kind::Negate;
}

Expr negated_term(const Expr& t) {
  if (t.is_constant()) return Expr(-t.number());
  if (t.kind() == Expr::Kind::Negate) return t.args()[0];
  std::vector<Expr> factors(t.args().begin(), t.args().end());
  factors[0] = Expr(-factors[0].number());
  if (factors[0].is_one()) factors.erase(factors.begin());
  if (factors.size() == 1) return factors[0];
  return Expr::raw_product(std::move(factors));
}

std::string print(const Expr& e, Ctx ctx) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return print_constant(e.number(), ctx);
    case Expr::Kind::Symbol: return e.symbol_name();
    case Expr::Kind::Sum: {
      auto terms = e.args();
      std::string s;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i == 0) {
          s = print(terms[i], Ctx::Top);
        } else if (is_negative_term(terms[i])) {
          s += " - " + print(negated_term(terms[i]), Ctx::Term);
        } else {
          s += " + " + print(terms[i], Ctx::Term);
        }
      }
      if (terms.empty()) s = "0";
      return ctx >= Ctx::Term ? wrap(s) : s;
    }
    case Expr::Kind::Product: return print_product(e, ctx);
    case Expr::Kind::Power: {
      std::string s = print(e.args()[0], Ctx::Base) + "^" + std::to_string(e.exponent());
      return ctx == Ctx::Base ? wrap(s) : s;
    }
    case Expr::Kind::Negate: {
      std::string s = "-" + print(e.args()[0], Ctx::Base);
      return ctx >= Ctx::Term ? wrap(s) : s;
    }
    case Expr::Kind::Function:
      return std::string(function_name(e.func())) + "(" + print(e.args()[0], Ctx::Top) + ")";
  }
  return "";
}

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := base ('^' integer)?
// base   := number | symbol | func '(' expr ')' | '(' expr ')' | '-' base
class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : s_(text), coords_(coords) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(Expr::raw_negate(term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : Expr::raw_sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{factor()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(factor());
      } else if (accept('/')) {
        factors.push_back(Expr::raw_power(factor(), -1));
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors[0] : Expr::raw_product(std::move(factors));
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) return Expr::raw_power(std::move(b), integer());
    return b;
  }

  int integer() {
    skip_ws();
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      negative = s_[pos_] == '-';
      ++pos_;
    }
    std::size_t start = pos_;
    long long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > std::numeric_limits<int>::max()) fail("exponent out of range");
      ++pos_;
    }
    if (pos_ == start) fail("expected integer exponent");
    return static_cast<int>(negative ? -v : v);
  }

  Expr base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return Expr::raw_negate(base());
    }
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    std::int64_t mantissa = 0;
    int digits = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool overflow = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        if (mantissa > (std::numeric_limits<std::int64_t>::max() - 9) / 10) {
          overflow = true;
        } else {
          mantissa = mantissa * 10 + (c - '0');
          if (seen_dot) ++frac_digits;
        }
        ++digits;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits == 0) fail("malformed number");
    int exponent = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      bool negative = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) negative = s_[pos_++] == '-';
      std::size_t exp_start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        if (exponent < 10000) exponent = exponent * 10 + (s_[pos_] - '0');
        ++pos_;
      }
      if (pos_ == exp_start) {
        pos_ = save;  // not an exponent; let the caller report what follows
      } else if (negative) {
        exponent = -exponent;
      }
    }
    int scale = exponent - frac_digits;
    if (!overflow && scale >= -18 && scale <= 18) {
      Number ten(10);
      Number value(mantissa);
      try {
        Number result = scale >= 0 ? value * ten.pow(scale) : value / ten.pow(-scale);
        if (result.exact()) return Expr(result);
      } catch (const DomainError&) {
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    return Expr::real(std::strtod(text.c_str(), nullptr));
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(s_.substr(start, pos_ - start));
    static constexpr std::pair<std::string_view, Expr::Func> kFuncs[] = {
        {"sin", Expr::Func::Sin}, {"cos", Expr::Func::Cos},   {"exp", Expr::Func::Exp},
        {"ln", Expr::Func::Ln},   {"sqrt", Expr::Func::Sqrt},
    };
    for (const auto& [fname, f] : kFuncs) {
      if (name != fname) continue;
      if (!accept('(')) break;
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return Expr::raw_function(f, std::move(arg));
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) return Expr::symbol(static_cast<int>(i), name);
    }
    throw UnknownSymbolError(name, start);
  }

  std::string_view s_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Expr& e) { return print(e, Ctx::Top); }

Expr parse_expr(std::string_view text, std::span<const std::string> coords) {
  return Parser(text, coords).parse();
}

}  // namespace evoform
