#include "evoform/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "evoform/error.hpp"

namespace evoform {

EvolutionaryRelation build_relation(const MaterialSystemSpec& spec, const ZeroTest& zt) {
  const Chart& chart = spec.chart;
  int n = chart.dim();
  int p = spec.degree;
  if (p < 0 || p > 3) throw DimensionError("relation degree must be 0..3");
  if (spec.actions && spec.omega) throw DimensionError("give either actions or omega, not both");

  DifferentialForm rhs(n, p);
  if (spec.actions) {
    if (p != 1) throw DimensionError("actions define a 1-form; degree must be 1");
    if (static_cast<int>(spec.actions->size()) != n) throw DimensionError("one action per chart coordinate");
    rhs = DifferentialForm::one_form(*spec.actions);
  } else if (spec.omega) {
    if (spec.omega->dim() != n) throw DimensionError("omega and chart dimensions differ");
    if (spec.omega->degree() != p) throw DimensionError("omega degree differs from relation degree");
    rhs = *spec.omega;
  } else {
    throw DimensionError("relation needs actions or omega");
  }

  DifferentialForm lhs(n, p);
  if (spec.psi) {
    if (p == 0) throw DimensionError("a degree-0 relation has no psi");
    if (spec.psi->dim() != n) throw DimensionError("psi and chart dimensions differ");
    if (spec.psi->degree() != p - 1) throw DimensionError("psi degree must be p - 1");
    lhs = exterior_derivative(*spec.psi);
  }

  EvolutionaryRelation rel{chart, p, spec.psi, std::move(lhs), rhs, std::nullopt, DifferentialForm(n, p + 1)};
  if (p == 1) {
    rel.commutator = connection_commutator(rhs, chart, zt.seed);
    rel.differential = rel.commutator->total;
  } else {
    rel.differential = exterior_derivative(rhs);
  }
  rel.identical = is_zero_form(rel.differential, chart.sampling(zt));
  return rel;
}

double nonidentity_norm(const EvolutionaryRelation& rel, const std::vector<std::vector<double>>& points) {
  auto coeffs = rel.differential.coefficients();
  return sup_norm_at(coeffs, points);
}

double nonidentity_norm(const EvolutionaryRelation& rel, std::uint64_t seed) {
  auto points = estimate_points(rel.chart.box(), static_cast<std::size_t>(rel.chart.dim()), 64, seed);
  return nonidentity_norm(rel, points);
}

Expr poisson_bracket(const Expr& f, const Expr& g, std::span<const std::pair<int, int>> pairs) {
  std::vector<Expr> terms;
  for (auto [q, p] : pairs) {
    terms.push_back(differentiate(f, q) * differentiate(g, p));
    terms.push_back(-(differentiate(f, p) * differentiate(g, q)));
  }
  return Expr::add(std::move(terms));
}

Expr functional_expr(const DegeneracyFunctional& f, int dim) {
  Expr e = std::visit(
      [dim](const auto& fn) -> Expr {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, RawFunctional>) {
          return fn.expr;
        } else if constexpr (std::is_same_v<T, JacobianFunctional>) {
          if (static_cast<int>(fn.map.size()) != dim) throw DimensionError("jacobian map needs one component per coordinate");
          ExprMatrix j(dim);
          for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) j(r, c) = differentiate(fn.map[static_cast<std::size_t>(r)], c);
          }
          return determinant(j);
        } else if constexpr (std::is_same_v<T, DeterminantFunctional>) {
          return determinant(fn.matrix);
        } else {
          for (auto [q, p] : fn.pairs) {
            if (q < 0 || p < 0 || q >= dim || p >= dim) throw DimensionError("poisson pair index out of range");
          }
          return poisson_bracket(fn.f, fn.g, fn.pairs);
        }
      },
      f);
  if (e.max_symbol_index() >= dim) throw DimensionError("functional uses symbols outside the chart");
  return e;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double checked_eval(const Expr& e, std::span<const double> x) {
  double v = evaluate(e, x);
  if (!std::isfinite(v)) throw DomainError("functional is not finite on the grid");
  return v;
}

std::vector<std::vector<std::vector<double>>> cluster(const std::vector<std::vector<double>>& pts, double link) {
  std::size_t n = pts.empty() ? 0 : pts[0].size();
  std::map<std::vector<long>, std::vector<std::size_t>> cells;
  auto cell_of = [&](const std::vector<double>& x) {
    std::vector<long> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = static_cast<long>(std::floor(x[i] / link));
    return key;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) cells[cell_of(pts[i])].push_back(i);

  DisjointSets sets(pts.size());
  std::size_t stencil = 1;
  for (std::size_t i = 0; i < n; ++i) stencil *= 3;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<long> base = cell_of(pts[i]);
    for (std::size_t s = 0; s < stencil; ++s) {
      std::vector<long> key = base;
      std::size_t code = s;
      for (std::size_t a = 0; a < n; ++a, code /= 3) key[a] += static_cast<long>(code % 3) - 1;
      auto it = cells.find(key);
      if (it == cells.end()) continue;
      for (std::size_t j : it->second) {
        if (j <= i) continue;
        double d2 = 0.0;
        for (std::size_t a = 0; a < n; ++a) d2 += (pts[i][a] - pts[j][a]) * (pts[i][a] - pts[j][a]);
        if (d2 <= link * link * (1.0 + 1e-12)) sets.unite(i, j);
      }
    }
  }
  std::map<std::size_t, std::vector<std::vector<double>>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) groups[sets.find(i)].push_back(pts[i]);
  std::vector<std::vector<std::vector<double>>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace

std::vector<Pseudostructure> find_degeneracy_loci(const DegeneracyFunctional& f, const Chart& c, int grid, double tol) {
  if (grid < 2) throw DimensionError("grid needs at least 2 nodes per axis");
  int n = c.dim();
  auto un = static_cast<std::size_t>(n);
  Expr e = functional_expr(f, n);

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::size_t>(grid);
    if (total > (std::size_t{1} << 24)) throw DimensionError("grid has too many nodes");
  }
  auto ug = static_cast<std::size_t>(grid);
  std::vector<Interval> axes;
  double spacing = 0.0;
  for (std::size_t i = 0; i < un; ++i) {
    axes.push_back(box_interval(c.box(), i));
    spacing = std::max(spacing, axes.back().width() / (grid - 1));
  }
  auto node_coord = [&](std::size_t axis, std::size_t k) {
    const Interval& iv = axes[axis];
    return k + 1 == ug ? iv.hi : iv.lo + static_cast<double>(k) * iv.width() / (grid - 1);
  };

  std::vector<double> values(total);
  std::vector<std::size_t> idx(un);
  std::vector<double> x(un);
  auto decode = [&](std::size_t flat) {
    for (std::size_t a = un; a-- > 0;) {
      idx[a] = flat % ug;
      flat /= ug;
      x[a] = node_coord(a, idx[a]);
    }
  };
  for (std::size_t flat = 0; flat < total; ++flat) {
    decode(flat);
    values[flat] = checked_eval(e, x);
  }

  std::vector<std::vector<double>> points;
  for (std::size_t flat = 0; flat < total; ++flat) {
    decode(flat);
    double fa = values[flat];
    if (fa == 0.0) {
      points.push_back(x);
      continue;
    }
    std::size_t stride = 1;
    for (std::size_t a = un; a-- > 0; stride *= ug) {
      if (idx[a] + 1 == ug) continue;
      double fb = values[flat + stride];
      if (fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
      double lo = x[a];
      double hi = node_coord(a, idx[a] + 1);
      double flo = fa;
      std::vector<double> y = x;
      for (int it = 0; it < 60; ++it) {
        y[a] = 0.5 * (lo + hi);
        double fm = checked_eval(e, y);
        if (std::abs(fm) < tol) break;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = y[a];
          flo = fm;
        } else {
          hi = y[a];
        }
      }
      points.push_back(std::move(y));
    }
  }

  std::vector<Pseudostructure> out;
  for (auto& component : cluster(points, std::sqrt(static_cast<double>(n)) * spacing)) {
    out.emplace_back(c.coords(), c.box(), std::vector<Expr>{e}, std::nullopt, ZeroTest{}, std::move(component));
  }
  return out;
}

IdenticalRelation extract_identical_form(const DifferentialForm& form, const Pseudostructure& ps, const ZeroTest& zt) {
  const Parametrization& par = ps.require_parametrization();
  if (form.dim() != ps.ambient_dim()) throw DimensionError("form and pseudostructure ambient dimensions differ");
  if (form.degree() < 1) throw DimensionError("a 0-form has no potential to extract");
  if (form.degree() > ps.dim()) throw DimensionError("form degree exceeds pseudostructure dimension");

  ZeroTest local = par.sampling(zt);
  DifferentialForm restricted = restrict_to_pseudostructure(form, ps);
  DifferentialForm dr = exterior_derivative(restricted);
  double closure = dr.is_zero() ? 0.0 : form_sup_norm(dr, local);
  if (closure > zt.tol) {
    throw AnalysisError("restriction is not closed on the pseudostructure (residual " + std::to_string(closure) + ")");
  }

  DifferentialForm potential = *find_potential(restricted, local);
  std::vector<Expr> named = coordinate_symbols(par.params);
  potential = potential.map_coefficients([&](const Expr& c) { return substitute(c, named); });
  DifferentialForm diff = exterior_derivative(potential) - restricted;
  double residual = diff.is_zero() ? 0.0 : form_sup_norm(diff, local);
  return {ps, std::move(restricted), std::move(potential), closure, residual};
}

IdenticalRelation extract_identical_relation(const EvolutionaryRelation& rel, const Pseudostructure& ps,
                                             const ZeroTest& zt) {
  return extract_identical_form(rel.rhs, ps, zt);
}

CascadeReport integration_cascade(const EvolutionaryRelation& rel, const std::vector<Pseudostructure>& ps_chain,
                                  const ZeroTest& zt) {
  if (static_cast<int>(ps_chain.size()) > rel.degree) throw DimensionError("cascade longer than the relation degree");
  CascadeReport report;
  if (ps_chain.empty()) {
    report.message = "no degenerate transformation realized";
    return report;
  }
  DifferentialForm current = rel.rhs;
  for (std::size_t j = 0; j < ps_chain.size(); ++j) {
    try {
      IdenticalRelation stage = extract_identical_form(current, ps_chain[j], zt);
      report.k_values.push_back(stage.restricted.degree());
      current = stage.potential;
      report.stages.push_back(std::move(stage));
    } catch (const Error& e) {
      report.message = "stage " + std::to_string(j + 1) + ": " + e.what();
      return report;
    }
  }
  report.k_values.push_back(current.degree());
  report.complete = true;
  report.message = "cascade complete";
  return report;
}

StructureClass classify_structure(int p, int k, int n) {
  if (k < 0 || k > p || p > 3) throw DimensionError("need 0 <= k <= p <= 3");
  if (k > n) throw DimensionError("closed-form degree exceeds space dimension");
  static const char* kLabels[] = {"Schrodinger", "Hamiltonian", "Maxwell", "gravitational"};
  return {p, k, n, n - k, kLabels[k]};
}

std::vector<double> selfvariation(const MaterialSystemSpec& spec, const ActionUpdate& update, int steps,
                                  const ZeroTest& zt) {
  if (spec.degree != 1 || !spec.actions) throw DimensionError("selfvariation needs a degree-1 spec with actions");
  MaterialSystemSpec current = spec;
  std::vector<double> norms{nonidentity_norm(build_relation(current, zt), zt.seed)};
  for (int s = 0; s < steps; ++s) {
    current.actions = update(*current.actions, s);
    norms.push_back(nonidentity_norm(build_relation(current, zt), zt.seed));
  }
  return norms;
}

double hausdorff_to_circle(const std::vector<std::vector<double>>& points, double r) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& x : points) worst = std::max(worst, std::abs(std::hypot(x[0], x[1]) - r));
  constexpr int kSamples = 4096;
  for (int k = 0; k < kSamples; ++k) {
    double a = 2.0 * std::numbers::pi * k / kSamples;
    double cx = r * std::cos(a);
    double cy = r * std::sin(a);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& x : points) nearest = std::min(nearest, std::hypot(x[0] - cx, x[1] - cy));
    worst = std::max(worst, nearest);
  }
  return worst;
}

namespace {

ExampleReport hamiltonian_example(const ZeroTest& zt) {
  Chart chart({"t", "q", "p"});
  Expr q = Expr::symbol(1, "q");
  Expr p = Expr::symbol(2, "p");
  Expr h = (p * p + q * q) / Expr(2);
  DifferentialForm omega = DifferentialForm::one_form({-h, p, Expr()});
  Expr dh_dq = differentiate(h, 1);
  Expr dh_dp = differentiate(h, 2);

  auto field = [&](double t, double qq, double pp) {
    std::array<double, 3> at{t, qq, pp};
    return std::array<double, 2>{evaluate(dh_dp, at), -evaluate(dh_dq, at)};
  };

  const double step = 1e-3;
  const double period = 2.0 * std::numbers::pi;
  std::vector<std::array<double, 3>> path{{0.0, 1.0, 0.0}};
  while (path.back()[0] < period) {
    auto [t, qq, pp] = path.back();
    double hs = std::min(step, period - t);
    if (hs <= 0.0) break;
    auto k1 = field(t, qq, pp);
    auto k2 = field(t + hs / 2, qq + hs / 2 * k1[0], pp + hs / 2 * k1[1]);
    auto k3 = field(t + hs / 2, qq + hs / 2 * k2[0], pp + hs / 2 * k2[1]);
    auto k4 = field(t + hs, qq + hs * k3[0], pp + hs * k3[1]);
    path.push_back({t + hs, qq + hs / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                    pp + hs / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])});
  }
  if (path.back()[0] < period) path.back()[0] = period;

  // Route 1: omega contracted with the exact tangent, trapezoid in t.
  auto integrand = [&](const std::array<double, 3>& x) {
    auto v = field(x[0], x[1], x[2]);
    std::array<double, 3> tangent{1.0, v[0], v[1]};
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += evaluate(omega.coefficient({i}), x) * tangent[static_cast<std::size_t>(i)];
    return s;
  };
  // Route 2: sum p dq along the discrete orbit minus the integral of H dt.
  double line = 0.0;
  double action = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& a = path[i - 1];
    const auto& b = path[i];
    double dt = b[0] - a[0];
    line += 0.5 * dt * (integrand(a) + integrand(b));
    action += 0.5 * (a[2] + b[2]) * (b[1] - a[1]) - 0.5 * dt * (evaluate(h, a) + evaluate(h, b));
  }
  double delta = std::abs(line - action);

  MaterialSystemSpec spec{chart, std::nullopt, std::nullopt, omega, 1};
  EvolutionaryRelation rel = build_relation(spec, zt);

  ExampleReport r{"hamiltonian", delta < 1e-5, {}};
  r.values["line_integral"] = line;
  r.values["action_integral"] = action;
  r.values["delta"] = delta;
  r.values["steps"] = static_cast<std::int64_t>(path.size() - 1);
  r.values["step"] = step;
  r.values["identical"] = rel.identical;
  r.values["nonidentity_norm"] = nonidentity_norm(rel, zt.seed);
  return r;
}

ExampleReport maxwell_example(const ZeroTest& zt) {
  ExprMatrix g(4);
  g(0, 0) = Expr(1);
  for (int i = 1; i < 4; ++i) g(i, i) = Expr(-1);
  Chart chart({"t", "x", "y", "z"}, g, std::nullopt, {}, zt);
  auto s = chart.symbols();
  DifferentialForm a = DifferentialForm::one_form({Expr(), sin(s[3] - s[0]), Expr(), Expr()});
  DifferentialForm f = exterior_derivative(a);
  ZeroTest local = chart.sampling(zt);
  bool closed = is_zero_form(exterior_derivative(f), local);
  DifferentialForm dual = hodge_star(f, chart);
  bool dual_closed = is_zero_form(exterior_derivative(dual), local);

  ExampleReport r{"maxwell", closed && dual_closed && !f.is_zero(), {}};
  r.values["closed"] = closed;
  r.values["dual_closed"] = dual_closed;
  r.values["field"] = to_string(f);
  r.values["dual_field"] = to_string(dual);
  return r;
}

ExampleReport eikonal_example(int grid) {
  Chart chart({"x", "y"});
  auto s = chart.symbols();
  const Expr tau(1);
  Expr front = s[0] * s[0] + s[1] * s[1] - tau * tau;
  auto loci = find_degeneracy_loci(RawFunctional{front}, chart, grid);
  std::vector<std::vector<double>> points;
  for (const auto& ps : loci) points.insert(points.end(), ps.points().begin(), ps.points().end());
  double spacing = 4.0 / (grid - 1);
  double error = hausdorff_to_circle(points, 1.0);

  ExampleReport r{"eikonal", loci.size() == 1 && error < 2.0 * spacing, {}};
  r.values["components"] = static_cast<std::int64_t>(loci.size());
  r.values["points"] = static_cast<std::int64_t>(points.size());
  r.values["grid_spacing"] = spacing;
  r.values["hausdorff"] = error;
  return r;
}

ExampleReport entropy_gas_example(const ZeroTest& zt) {
  Chart chart({"xi1", "xi2"});
  auto xi = chart.symbols();
  Expr entropy = ln(Expr(1) + xi[1] * xi[1]);
  MaterialSystemSpec spec{chart, DifferentialForm::scalar(2, entropy),
                          std::vector<Expr>{Expr(), differentiate(entropy, 1)}, std::nullopt, 1};
  EvolutionaryRelation rel = build_relation(spec, zt);
  bool balanced = is_zero_form(rel.lhs - rel.rhs, chart.sampling(zt));

  ExampleReport r{"entropy_gas", rel.identical, {}};
  r.values["identical"] = rel.identical;
  r.values["nonidentity_norm"] = nonidentity_norm(rel, zt.seed);
  r.values["lhs_equals_rhs"] = balanced;
  r.values["lhs"] = to_string(rel.lhs);
  return r;
}

}  // namespace

std::vector<std::string> example_names() { return {"eikonal", "entropy_gas", "hamiltonian", "maxwell"}; }

ExampleReport run_example(std::string_view name, const ZeroTest& zt, int grid) {
  if (name == "hamiltonian") return hamiltonian_example(zt);
  if (name == "maxwell") return maxwell_example(zt);
  if (name == "eikonal") return eikonal_example(grid);
  if (name == "entropy_gas") return entropy_gas_example(zt);
  throw Error("unknown example: " + std::string(name));
}

}  // namespace evoform
