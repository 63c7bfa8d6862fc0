#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evoform/number.hpp"

namespace evoform {

/// Immutable symbolic scalar over chart coordinates.
///
/// Symbols are identified by their coordinate index; the name is kept for
/// printing. Nodes are shared, so copying an Expr is cheap and thread-safe.
///
/// The arithmetic operators and the named factories `add`, `mul`, `pow`,
/// `apply` build lightly normalized trees (constant folding, 0/1
/// absorption, flattening, like-term and like-base collection). The `raw_*`
/// factories build the tree exactly as given; the parser uses them.
class Expr {
 public:
  enum class Kind { Constant, Symbol, Sum, Product, Power, Negate, Function };
  enum class Func { Sin, Cos, Exp, Ln, Sqrt };

  Expr();  // constant 0
  Expr(Number n);  // NOLINT(google-explicit-constructor)
  Expr(std::int64_t n) : Expr(Number(n)) {}  // NOLINT(google-explicit-constructor)
  Expr(int n) : Expr(Number(n)) {}  // NOLINT(google-explicit-constructor)
  Expr(double) = delete;  // use Expr::real

  static Expr real(double v) { return Expr(Number::real(v)); }
  static Expr symbol(int index, std::string name);

  static Expr raw_sum(std::vector<Expr> terms);
  static Expr raw_product(std::vector<Expr> factors);
  static Expr raw_power(Expr base, int exponent);
  static Expr raw_negate(Expr arg);
  static Expr raw_function(Func f, Expr arg);

  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(const Expr& base, int exponent);
  static Expr apply(Func f, const Expr& arg);

  Kind kind() const;
  const Number& number() const;            // Constant
  int symbol_index() const;                // Symbol
  const std::string& symbol_name() const;  // Symbol
  int exponent() const;                    // Power
  Func func() const;                       // Function
  std::span<const Expr> args() const;      // Sum, Product, Power (base), Negate, Function

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero() const;
  bool is_one() const;

  /// Largest symbol index occurring in the tree, or -1.
  int max_symbol_index() const;

  /// Number of nodes; used to keep an eye on growth in tests and benchmarks.
  std::size_t size() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Structural three-way comparison; a total order on trees.
int compare(const Expr& a, const Expr& b);
inline bool structurally_equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

inline Expr sin(const Expr& a) { return Expr::apply(Expr::Func::Sin, a); }
inline Expr cos(const Expr& a) { return Expr::apply(Expr::Func::Cos, a); }
inline Expr exp(const Expr& a) { return Expr::apply(Expr::Func::Exp, a); }
inline Expr ln(const Expr& a) { return Expr::apply(Expr::Func::Ln, a); }
inline Expr sqrt(const Expr& a) { return Expr::apply(Expr::Func::Sqrt, a); }

std::string_view function_name(Expr::Func f);

/// Exact partial derivative with respect to the coordinate with `index`.
Expr differentiate(const Expr& e, int index);
/// Same, addressing the coordinate by name. A name that does not occur in
/// `e` yields zero.
Expr differentiate(const Expr& e, std::string_view name);

/// IEEE evaluation with `point[i]` bound to symbol i.
/// Throws DomainError or UnboundSymbolError.
double evaluate(const Expr& e, std::span<const double> point);

/// Rebuilds the tree through the normalizing factories. Guarantees constant
/// folding, 0/1 absorption and flattening; not a canonical form (no trig
/// identities, no expansion of products over sums).
Expr simplify(const Expr& e);

/// Replaces symbol i by `values[i]`. Symbols beyond `values.size()` are kept.
Expr substitute(const Expr& e, std::span<const Expr> values);

/// Text in the parser's grammar; parse(to_string(e)) is semantically e.
std::string to_string(const Expr& e);

/// Parses `text` over the given coordinate names. Throws ParseError or
/// UnknownSymbolError.
Expr parse_expr(std::string_view text, std::span<const std::string> coords);

}  // namespace evoform
