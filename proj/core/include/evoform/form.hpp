#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "evoform/expr.hpp"
#include "evoform/sampling.hpp"

namespace evoform {

/// Strictly increasing coordinate indices naming a basis monomial
/// dx^{i1} ^ ... ^ dx^{ip}.
using IndexTuple = std::vector<int>;

/// Sign of the permutation sorting `idx`, or 0 when an index repeats.
/// On return `idx` is sorted.
int sort_with_sign(IndexTuple& idx);

/// Degree-p differential form on an n-dimensional chart.
///
/// Terms are keyed by strictly increasing index tuples; a missing key is a
/// zero coefficient, so the zero form of any degree is the empty map.
class DifferentialForm {
 public:
  DifferentialForm(int dim, int degree);

  static DifferentialForm scalar(int dim, Expr f);
  /// sum_i coeffs[i] dx^i
  static DifferentialForm one_form(std::vector<Expr> coeffs);
  /// coeff * dx^{idx}; idx may be unsorted, the permutation sign is applied.
  static DifferentialForm monomial(int dim, IndexTuple idx, Expr coeff = Expr(1));

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const std::map<IndexTuple, Expr>& terms() const noexcept { return terms_; }

  /// Coefficient of dx^{idx}, with sign for unsorted idx; zero when absent.
  Expr coefficient(IndexTuple idx) const;

  /// Adds coeff * dx^{idx}, accumulating into an existing term.
  void add_term(IndexTuple idx, const Expr& coeff);

  bool is_zero() const noexcept { return terms_.empty(); }
  std::vector<Expr> coefficients() const;

  /// Applies `fn` to every coefficient and drops the terms that become zero.
  template <class Fn>
  DifferentialForm map_coefficients(Fn&& fn) const {
    DifferentialForm out(dim_, degree_);
    for (const auto& [idx, c] : terms_) out.add_term(idx, fn(c));
    return out;
  }

  friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator*(const Expr& f, const DifferentialForm& a);

 private:
  int dim_;
  int degree_;
  std::map<IndexTuple, Expr> terms_;
};

struct VectorField {
  std::vector<Expr> components;
  int dim() const noexcept { return static_cast<int>(components.size()); }
  /// The coordinate field d/dx^i.
  static VectorField coordinate(int dim, int i);
};

/// Map from an m-dimensional source chart into an n-dimensional target
/// chart: target coordinate i equals components[i], written in source
/// symbols.
struct CoordinateMap {
  int source_dim = 0;
  std::vector<Expr> components;
  int target_dim() const noexcept { return static_cast<int>(components.size()); }
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
/// Degree p + 1; empty when p >= dim.
DifferentialForm exterior_derivative(const DifferentialForm& t);
DifferentialForm interior_product(const VectorField& v, const DifferentialForm& t);
DifferentialForm pullback(const CoordinateMap& map, const DifferentialForm& t);
DifferentialForm linear_combine(std::span<const double> coeffs, std::span<const DifferentialForm> forms);

/// Every coefficient of `t` passes the zero test.
bool is_zero_form(const DifferentialForm& t, const ZeroTest& zt);
/// max |coefficient| over the zero test's sample points.
double form_sup_norm(const DifferentialForm& t, const ZeroTest& zt);

/// Default coordinate names: x, y, z for dim <= 3, else x0..x{n-1}.
std::vector<std::string> default_coordinates(int dim);
std::vector<Expr> coordinate_symbols(std::span<const std::string> names);

std::string to_string(const DifferentialForm& t);

}  // namespace evoform
