#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoform/form.hpp"
#include "evoform/geometry.hpp"
#include "evoform/sampling.hpp"

namespace evoform {

/// Map from a parameter chart onto a pseudostructure.
struct Parametrization {
  std::vector<std::string> params;
  std::vector<Expr> map;  // ambient coordinate i = map[i](params)
  SampleBox box;          // parameter sampling region

  int dim() const noexcept { return static_cast<int>(params.size()); }
  CoordinateMap as_map() const { return {dim(), map}; }
  ZeroTest sampling(const ZeroTest& base) const { return base.with_box(resized_box(box, params.size())); }
};

/// Level set {c_i = 0} of m constraint functions in an n-dimensional
/// ambient chart, optionally with an explicit parametrization and a point
/// cloud (as produced by the degeneracy scan).
class Pseudostructure {
 public:
  /// Validates: when parametrized, the parameter count is n - m and every
  /// constraint vanishes along the map; the constraint gradients have Gram
  /// determinant > 1e-8 at up to 16 locus points.
  Pseudostructure(std::vector<std::string> ambient, SampleBox ambient_box, std::vector<Expr> constraints,
                  std::optional<Parametrization> parametrization, const ZeroTest& checks = {},
                  std::vector<std::vector<double>> points = {});

  int ambient_dim() const noexcept { return static_cast<int>(ambient_.size()); }
  int dim() const noexcept { return ambient_dim() - static_cast<int>(constraints_.size()); }
  const std::vector<std::string>& ambient_coords() const noexcept { return ambient_; }
  const SampleBox& ambient_box() const noexcept { return ambient_box_; }
  const std::vector<Expr>& constraints() const noexcept { return constraints_; }
  const std::optional<Parametrization>& parametrization() const noexcept { return param_; }
  const std::vector<std::vector<double>>& points() const noexcept { return points_; }

  /// Throws StructureError when there is no parametrization.
  const Parametrization& require_parametrization() const;

 private:
  std::vector<std::string> ambient_;
  SampleBox ambient_box_;
  std::vector<Expr> constraints_;
  std::optional<Parametrization> param_;
  std::vector<std::vector<double>> points_;
};

enum class Closure { Exact, ClosedInexact, ClosedOnPseudostructure, Unclosed };
std::string_view closure_name(Closure c);

struct ClosureReport {
  Closure classification = Closure::Unclosed;
  std::optional<DifferentialForm> potential;         // Exact
  std::optional<Pseudostructure> pseudostructure;    // ClosedOnPseudostructure
  std::optional<std::vector<double>> witness_point;  // Unclosed
  std::optional<DifferentialForm> witness_differential;
  double closure_residual = 0.0;     // sup |d theta|
  double restricted_residual = 0.0;  // sup |d_pi theta| when a pseudostructure was given
  double potential_residual = 0.0;   // sup |d(potential) - theta| when reconstructed
};

/// Every coefficient of d(theta) passes the zero test.
bool is_closed(const DifferentialForm& t, const ZeroTest& zt = {});

/// Center used by the homotopy operator: the origin when the box contains
/// it, else the box center.
std::vector<double> homotopy_center(const SampleBox& box, std::size_t dim);

/// Homotopy (cone) operator about `center`:
///   (K theta)(x) = sum_I [int_0^1 t^{p-1} theta_I(c + t(x - c)) dt] i_{x-c} dx^I.
/// Polynomial coefficients integrate exactly; numerically constant
/// coefficients are replaced by their value first; anything else uses
/// 16-node Gauss-Legendre quadrature. `used_quadrature` reports the path.
DifferentialForm homotopy_operator(const DifferentialForm& t, std::span<const double> center, const ZeroTest& zt,
                                   bool* used_quadrature = nullptr);

/// Potential of a closed form: theta^{p-1} with d(result) = theta over the
/// sample box. nullopt for degree 0. Throws AnalysisError when `t` is not
/// closed, or when the quadrature residual exceeds `quadrature_tol`.
std::optional<DifferentialForm> find_potential(const DifferentialForm& t, const ZeroTest& zt = {},
                                               double quadrature_tol = 1e-6);

/// Pullback of `t` along the pseudostructure's parametrization.
DifferentialForm restrict_to_pseudostructure(const DifferentialForm& t, const Pseudostructure& ps);

struct DualFormReport {
  DifferentialForm restricted;
  DifferentialForm restricted_dual;
  double restricted_sup = 0.0;    // sup |restricted coefficients|
  double closure_residual = 0.0;  // sup |d_pi theta|
  double dual_residual = 0.0;     // sup |d_pi *theta|
  bool closed = false;
  bool dual_closed = false;
  bool exact_conservation() const noexcept { return closed && dual_closed; }
};

DualFormReport dual_form_check(const Pseudostructure& ps, const Chart& c, const DifferentialForm& t,
                               const ZeroTest& zt = {});

/// exact / closed_inexact / closed_on_pseudostructure / unclosed.
ClosureReport classify_form(const DifferentialForm& t, const std::optional<Pseudostructure>& ps,
                            const ZeroTest& zt = {}, bool star_shaped = true);

}  // namespace evoform
