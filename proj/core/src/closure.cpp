#include "evoform/closure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>

#include "evoform/error.hpp"
#include "evoform/polynomial.hpp"

namespace evoform {

namespace {

// Gauss-Legendre nodes and weights mapped to [0, 1].
struct UnitQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const UnitQuadrature& unit_gauss16() {
  static const UnitQuadrature q = [] {
    using Rule = boost::math::quadrature::gauss<double, 16>;
    UnitQuadrature out;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        out.nodes.push_back(0.5 * (1.0 + s * x[i]));
        out.weights.push_back(0.5 * w[i]);
      }
    }
    return out;
  }();
  return q;
}

std::vector<double> locus_points(const Pseudostructure& ps, const ZeroTest& zt, std::size_t count) {
  std::vector<std::vector<double>> pts;
  if (ps.parametrization()) {
    const Parametrization& par = *ps.parametrization();
    PointSampler sampler(par.box, par.params.size(), zt.seed);
    for (std::size_t draw = 0; draw < 10 * count && pts.size() < count; ++draw) {
      auto u = sampler.next();
      try {
        std::vector<double> x;
        for (const Expr& m : par.map) x.push_back(evaluate(m, u));
        pts.push_back(std::move(x));
      } catch (const DomainError&) {
      }
    }
  } else {
    std::size_t step = std::max<std::size_t>(1, ps.points().size() / count);
    for (std::size_t i = 0; i < ps.points().size() && pts.size() < count; i += step) pts.push_back(ps.points()[i]);
  }
  std::vector<double> flat;
  for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
  return flat;
}

}  // namespace

Pseudostructure::Pseudostructure(std::vector<std::string> ambient, SampleBox ambient_box,
                                 std::vector<Expr> constraints, std::optional<Parametrization> parametrization,
                                 const ZeroTest& checks, std::vector<std::vector<double>> points)
    : ambient_(std::move(ambient)),
      ambient_box_(resized_box(ambient_box, ambient_.size())),
      constraints_(std::move(constraints)),
      param_(std::move(parametrization)),
      points_(std::move(points)) {
  int n = ambient_dim();
  if (dim() < 0) throw DimensionError("more constraints than ambient dimensions");
  for (const Expr& c : constraints_) {
    if (c.max_symbol_index() >= n) throw DimensionError("constraint uses symbols outside the ambient chart");
  }
  if (param_) {
    if (param_->dim() != dim()) throw DimensionError("parameter count differs from pseudostructure dimension");
    if (static_cast<int>(param_->map.size()) != n) throw DimensionError("parametrization must give every ambient coordinate");
    std::vector<Expr> along;
    for (const Expr& c : constraints_) along.push_back(substitute(c, param_->map));
    if (!all_identically_zero(along, param_->sampling(checks))) {
      throw StructureError("parametrization does not lie on the constraint locus");
    }
    // Isolated singular points (poles) are tolerated; a map that is nowhere
    // an immersion is not.
    int d = dim();
    if (d > 0) {
      std::vector<Expr> jac;
      for (const Expr& m : param_->map) {
        for (int a = 0; a < d; ++a) jac.push_back(differentiate(m, a));
      }
      PointSampler sampler(resized_box(param_->box, param_->params.size()), param_->params.size(), checks.seed);
      bool immersed = false;
      for (int s = 0; s < 16 && !immersed; ++s) {
        auto u = sampler.next();
        try {
          Eigen::MatrixXd j(n, d);
          for (int i = 0; i < n; ++i) {
            for (int a = 0; a < d; ++a) j(i, a) = evaluate(jac[static_cast<std::size_t>(i * d + a)], u);
          }
          immersed = (j.transpose() * j).determinant() > 1e-8;
        } catch (const DomainError&) {
        }
      }
      if (!immersed) throw StructureError("parametrization is degenerate: its Jacobian has rank below the dimension");
    }
  }
  if (constraints_.empty()) return;

  std::size_t m = constraints_.size();
  std::vector<std::vector<Expr>> grads(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) grads[i].push_back(differentiate(constraints_[i], k));
  }
  std::vector<double> flat = locus_points(*this, checks, 16);
  auto un = static_cast<std::size_t>(n);
  for (std::size_t off = 0; off + un <= flat.size(); off += un) {
    std::span<const double> x(flat.data() + off, un);
    try {
      Eigen::MatrixXd g(static_cast<Eigen::Index>(m), n);
      for (std::size_t i = 0; i < m; ++i) {
        for (int k = 0; k < n; ++k) g(static_cast<Eigen::Index>(i), k) = evaluate(grads[i][static_cast<std::size_t>(k)], x);
      }
      double gram = (g * g.transpose()).determinant();
      if (!(gram > 1e-8)) throw StructureError("constraint gradients are dependent on the locus");
    } catch (const DomainError&) {
    }
  }
}

const Parametrization& Pseudostructure::require_parametrization() const {
  if (!param_) throw StructureError("pseudostructure has no parametrization");
  return *param_;
}

std::string_view closure_name(Closure c) {
  switch (c) {
    case Closure::Exact: return "exact";
    case Closure::ClosedInexact: return "closed_inexact";
    case Closure::ClosedOnPseudostructure: return "closed_on_pseudostructure";
    case Closure::Unclosed: return "unclosed";
  }
  return "?";
}

bool is_closed(const DifferentialForm& t, const ZeroTest& zt) {
  return is_zero_form(exterior_derivative(t), zt);
}

std::vector<double> homotopy_center(const SampleBox& box, std::size_t dim) {
  if (box_contains_origin(box, dim)) return std::vector<double>(dim, 0.0);
  return box_center(box, dim);
}

DifferentialForm homotopy_operator(const DifferentialForm& t, std::span<const double> center, const ZeroTest& zt,
                                   bool* used_quadrature) {
  int n = t.dim();
  int p = t.degree();
  if (p < 1) throw DimensionError("homotopy operator needs degree >= 1");
  auto un = static_cast<std::size_t>(n);
  if (center.size() != un) throw DimensionError("center dimension differs from form chart");

  std::vector<Expr> c;
  std::vector<Expr> radial;
  std::vector<Expr> shift;  // x_i -> c_i + x_i
  for (std::size_t i = 0; i < un; ++i) c.emplace_back(Number::recognize(center[i], 1000000, 0.0));
  // Keep coordinate names for printing: take them from the coefficients.
  std::vector<std::string> names(un);
  auto harvest = [&](auto&& self, const Expr& e) -> void {
    if (e.kind() == Expr::Kind::Symbol) {
      auto i = static_cast<std::size_t>(e.symbol_index());
      if (i < un && names[i].empty()) names[i] = e.symbol_name();
      return;
    }
    for (const Expr& a : e.args()) self(self, a);
  };
  for (const auto& [idx, coeff] : t.terms()) harvest(harvest, coeff);
  auto defaults = default_coordinates(n);
  for (std::size_t i = 0; i < un; ++i) {
    if (names[i].empty()) names[i] = defaults[i];
    Expr xi = Expr::symbol(static_cast<int>(i), names[i]);
    radial.push_back(xi - c[i]);
    shift.push_back(c[i] + xi);
  }

  bool quadrature = false;
  DifferentialForm out(n, p - 1);
  for (const auto& [idx, coeff0] : t.terms()) {
    Expr coeff = coeff0;
    auto poly = to_polynomial(coeff, un);
    if (!poly) {
      if (auto k = numeric_constant(coeff, un, zt)) {
        coeff = Expr(*k);
        poly = Polynomial::constant(un, *k);
      }
    }
    Expr integrated;
    if (poly) {
      auto shifted = to_polynomial(substitute(coeff, shift), un);
      std::vector<Expr> terms;
      for (const auto& [mono, a] : shifted->terms()) {
        std::vector<Expr> factors{Expr(a / Number(p + std::accumulate(mono.begin(), mono.end(), 0)))};
        for (std::size_t i = 0; i < un; ++i) {
          if (mono[i] != 0) factors.push_back(Expr::pow(radial[i], mono[i]));
        }
        terms.push_back(Expr::mul(std::move(factors)));
      }
      integrated = Expr::add(std::move(terms));
    } else {
      quadrature = true;
      const UnitQuadrature& q = unit_gauss16();
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        double tk = q.nodes[k];
        std::vector<Expr> at;
        for (std::size_t i = 0; i < un; ++i) at.push_back(c[i] + Expr::real(tk) * radial[i]);
        double w = q.weights[k] * std::pow(tk, p - 1);
        terms.push_back(Expr::real(w) * substitute(coeff, at));
      }
      integrated = Expr::add(std::move(terms));
    }
    for (std::size_t j = 0; j < idx.size(); ++j) {
      IndexTuple rest = idx;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      Expr term = integrated * radial[static_cast<std::size_t>(idx[j])];
      out.add_term(std::move(rest), j % 2 == 0 ? term : -term);
    }
  }
  if (used_quadrature) *used_quadrature = quadrature;
  return out;
}

std::optional<DifferentialForm> find_potential(const DifferentialForm& t, const ZeroTest& zt, double quadrature_tol) {
  if (!is_closed(t, zt)) throw AnalysisError("form is not closed");
  if (t.degree() == 0) return std::nullopt;
  auto dim = static_cast<std::size_t>(t.dim());
  std::vector<double> center = homotopy_center(zt.box, dim);
  bool quadrature = false;
  DifferentialForm potential = homotopy_operator(t, center, zt, &quadrature);
  DifferentialForm diff = exterior_derivative(potential) - t;
  if (quadrature) {
    double residual = form_sup_norm(diff, zt);
    if (residual >= quadrature_tol) {
      throw AnalysisError("quadrature residual " + std::to_string(residual) + " exceeds tolerance");
    }
  } else if (!is_zero_form(diff, zt)) {
    throw AnalysisError("potential reconstruction residual exceeds tolerance");
  }
  return potential;
}

DifferentialForm restrict_to_pseudostructure(const DifferentialForm& t, const Pseudostructure& ps) {
  const Parametrization& par = ps.require_parametrization();
  if (t.dim() != ps.ambient_dim()) throw DimensionError("form and pseudostructure ambient dimensions differ");
  return pullback(par.as_map(), t);
}

DualFormReport dual_form_check(const Pseudostructure& ps, const Chart& c, const DifferentialForm& t,
                               const ZeroTest& zt) {
  const Parametrization& par = ps.require_parametrization();
  DifferentialForm dual = hodge_star(t, c);
  DualFormReport r{restrict_to_pseudostructure(t, ps), restrict_to_pseudostructure(dual, ps)};
  ZeroTest local = par.sampling(zt);
  auto sup = [&](const DifferentialForm& f) { return f.is_zero() ? 0.0 : form_sup_norm(f, local); };
  r.restricted_sup = sup(r.restricted);
  r.closure_residual = sup(exterior_derivative(r.restricted));
  r.dual_residual = sup(exterior_derivative(r.restricted_dual));
  r.closed = r.closure_residual <= zt.tol;
  r.dual_closed = r.dual_residual <= zt.tol;
  return r;
}

ClosureReport classify_form(const DifferentialForm& t, const std::optional<Pseudostructure>& ps, const ZeroTest& zt,
                            bool star_shaped) {
  ClosureReport rep;
  DifferentialForm dt = exterior_derivative(t);
  auto dcoeffs = dt.coefficients();
  rep.closure_residual = dcoeffs.empty() ? 0.0 : sampled_sup_norm(dcoeffs, zt);

  if (rep.closure_residual <= zt.tol) {
    rep.classification = Closure::ClosedInexact;
    if (star_shaped && t.degree() > 0) {
      try {
        auto potential = find_potential(t, zt);
        rep.classification = Closure::Exact;
        rep.potential_residual = form_sup_norm(exterior_derivative(*potential) - t, zt);
        rep.potential = std::move(potential);
      } catch (const AnalysisError&) {
      }
    } else if (t.is_zero()) {
      rep.classification = Closure::Exact;
    }
    return rep;
  }

  if (ps && ps->parametrization()) {
    DifferentialForm restricted = restrict_to_pseudostructure(t, *ps);
    DifferentialForm dr = exterior_derivative(restricted);
    rep.restricted_residual = dr.is_zero() ? 0.0 : form_sup_norm(dr, ps->parametrization()->sampling(zt));
    if (rep.restricted_residual <= zt.tol) {
      rep.classification = Closure::ClosedOnPseudostructure;
      rep.pseudostructure = ps;
      return rep;
    }
  }

  rep.classification = Closure::Unclosed;
  auto sampled = sample_values(dcoeffs, sampling_dim(dcoeffs, zt.box), zt);
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < sampled.values.size(); ++i) {
    for (double v : sampled.values[i]) {
      if (std::abs(v) > best_val) {
        best_val = std::abs(v);
        best = i;
      }
    }
  }
  rep.witness_point = sampled.points[best];
  rep.witness_differential = std::move(dt);
  return rep;
}

}  // namespace evoform
