#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "evoform/expr.hpp"
#include "evoform/form.hpp"
#include "evoform/sampling.hpp"

namespace evoform {

/// Dense dim^Rank array of expressions, row-major.
template <std::size_t Rank>
class ExprTensor {
 public:
  ExprTensor() = default;
  explicit ExprTensor(int dim) : dim_(dim), data_(count(dim)) {}

  int dim() const noexcept { return dim_; }

  template <class... I>
  Expr& operator()(I... i) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(i)...})];
  }
  template <class... I>
  const Expr& operator()(I... i) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(i)...})];
  }

  std::span<const Expr> data() const noexcept { return data_; }

 private:
  static std::size_t count(int dim) {
    std::size_t c = 1;
    for (std::size_t r = 0; r < Rank; ++r) c *= static_cast<std::size_t>(dim);
    return c;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int i : idx) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return o;
  }

  int dim_ = 0;
  std::vector<Expr> data_;
};

/// metric(mu, nu) = g_{mu nu}
using ExprMatrix = ExprTensor<2>;
/// connection(sigma, beta, alpha) = Gamma^sigma_{beta alpha}
using Connection = ExprTensor<3>;
/// curvature(rho, sigma, mu, nu) = R^rho_{sigma mu nu}
using Curvature = ExprTensor<4>;

Expr determinant(const ExprMatrix& m);
/// Determinant of the submatrix with the given rows and columns.
Expr minor_determinant(const ExprMatrix& m, std::span<const int> rows, std::span<const int> cols);

/// Coordinate system with optional metric and (possibly nonsymmetric)
/// connection.
///
/// Construction validates the metric: symmetry by zero test, and
/// |det g| > 1e-9 at 16 sample points. A metric without an explicit
/// connection gets the Levi-Civita connection. The signature is read from
/// the metric eigenvalues at the box center, nudged off singular points.
class Chart {
 public:
  explicit Chart(std::vector<std::string> coords, SampleBox box = {});
  Chart(std::vector<std::string> coords, std::optional<ExprMatrix> metric,
        std::optional<Connection> connection, SampleBox box = {}, const ZeroTest& checks = {});

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const noexcept { return coords_; }
  std::vector<Expr> symbols() const { return coordinate_symbols(coords_); }
  const SampleBox& box() const noexcept { return box_; }

  bool has_metric() const noexcept { return metric_.has_value(); }
  bool has_connection() const noexcept { return connection_.has_value(); }
  /// Throw StructureError when absent.
  const ExprMatrix& metric() const;
  const ExprMatrix& inverse_metric() const;
  const Expr& metric_determinant() const;
  const Connection& connection() const;
  /// False when the connection was derived from the metric.
  bool connection_given() const noexcept { return connection_given_; }

  /// Sign of each metric eigenvalue at the reference point.
  const std::vector<int>& signature() const noexcept { return signature_; }
  /// sign(det g); 1 without a metric.
  int determinant_sign() const noexcept { return det_sign_; }

  /// False marks the sampled region as not star-shaped about its center, so
  /// potential reconstruction is not attempted.
  bool star_shaped() const noexcept { return star_shaped_; }
  void set_star_shaped(bool v) noexcept { star_shaped_ = v; }

  ZeroTest sampling(const ZeroTest& base) const { return base.with_box(resized_box(box_, coords_.size())); }

 private:
  std::vector<std::string> coords_;
  SampleBox box_;
  std::optional<ExprMatrix> metric_;
  std::optional<ExprMatrix> inverse_;
  std::optional<Expr> det_;
  std::optional<Connection> connection_;
  std::vector<int> signature_;
  int det_sign_ = 1;
  bool connection_given_ = false;
  bool star_shaped_ = true;
};

/// Levi-Civita connection of the chart's metric.
Connection christoffel_from_metric(const Chart& c);

/// T^sigma_{beta alpha} = Gamma^sigma_{beta alpha} - Gamma^sigma_{alpha beta}
Connection torsion(const Chart& c);

/// Split of the commutator K_{ab} of a 1-form a = a_s dx^s:
///   K_{ab} = (d_a a_b - d_b a_a) + (Gamma^s_{ba} - Gamma^s_{ab}) a_s,
/// stored as 2-forms with coefficient K_{ab} on dx^a ^ dx^b (a < b).
struct CommutatorReport {
  DifferentialForm derivative_part;
  DifferentialForm torsion_part;
  DifferentialForm total;
  double sup_norm_estimate = 0.0;  // max |coefficient| over 64 points
};

CommutatorReport connection_commutator(const DifferentialForm& a, const Chart& c, std::uint64_t seed = 42);

DifferentialForm hodge_star(const DifferentialForm& t, const Chart& c);
/// delta = s (-1)^{n(p+1)+1} * d *, with s = sign(det g).
DifferentialForm codifferential(const DifferentialForm& t, const Chart& c);
/// Delta = d delta + delta d.
DifferentialForm laplace_derham(const DifferentialForm& t, const Chart& c);

/// R^rho_{sigma mu nu} = d_mu G^rho_{nu sigma} - d_nu G^rho_{mu sigma}
///                      + G^rho_{mu l} G^l_{nu sigma} - G^rho_{nu l} G^l_{mu sigma}
Curvature riemann_curvature(const Chart& c);

struct BianchiReport {
  double first_residual = 0.0;   // max |R^r_{[s m n]}| cyclic sums
  double second_residual = 0.0;  // max |nabla_{[l} R^r_{|s| m n]}| cyclic sums
  bool first_ok = false;
  bool second_ok = false;
  bool ok() const noexcept { return first_ok && second_ok; }
};

/// Samples both Bianchi identities; failures are reported, never raised.
BianchiReport bianchi_check(const Chart& c, const ZeroTest& zt = {});

}  // namespace evoform
