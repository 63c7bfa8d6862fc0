#include "evoform/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <tuple>
#include <numbers>

#include "evoform/closure.hpp"
#include "evoform/error.hpp"
#include "evoform/evolution.hpp"
#include "evoform/geometry.hpp"
#include "evoform/polynomial.hpp"
#include "evoform/random.hpp"

namespace evoform {

namespace {

// Suites draw from independent streams so adding cases to one leaves the
// others unchanged.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return seed ^ h;
}

class Tally {
 public:
  Tally(std::string_view module, std::string_view name) {
    r_.module = module;
    r_.name = name;
  }

  void check(bool ok, double residual, const std::string& what) {
    ++r_.cases;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    r_.worst = std::max(r_.worst, residual);
    if (!ok) fail(what);
  }
  void within(double residual, double limit, const std::string& what) {
    check(residual <= limit, residual, what + " residual " + fmt(residual));
  }
  void error(const std::string& what, const std::exception& e) {
    ++r_.cases;
    fail(what + ": " + e.what());
  }
  // Runs one case, turning any library error into a failure.
  template <class Fn>
  void guard(const std::string& what, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      error(what, e);
    }
  }

  SuiteResult done() { return std::move(r_); }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
  }

 private:
  void fail(const std::string& what) {
    if (r_.failures++ == 0) r_.detail = what;
  }
  SuiteResult r_;
};

double sup(const DifferentialForm& f, const ZeroTest& zt) { return f.is_zero() ? 0.0 : form_sup_norm(f, zt); }

std::string case_name(std::size_t i) { return "case " + std::to_string(i); }

ExprMatrix diagonal(std::vector<Expr> d) {
  ExprMatrix g(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) g(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return g;
}

ExprMatrix minkowski(int dim) {
  std::vector<Expr> d{Expr(1)};
  for (int i = 1; i < dim; ++i) d.emplace_back(-1);
  return diagonal(std::move(d));
}

Chart metric_chart(int dim, const ExprMatrix& g, const ZeroTest& zt) {
  return Chart(default_coordinates(dim), g, std::nullopt, {}, zt);
}

int sign_power(int e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------- symbolic-core

SuiteResult suite_derivative_vs_difference(const SuiteConfig& cfg) {
  Tally t("symbolic-core", "derivative_vs_difference");
  RandomInputs gen(stream_seed(cfg.seed, "derivative_vs_difference"));
  const double h = 1e-5;
  for (std::size_t i = 0; i < 500; ++i) {
    int n = gen.uniform_int(1, 4);
    Expr e = gen.polynomial(n, 4, 5);
    int var = gen.uniform_int(0, n - 1);
    Expr de = differentiate(e, var);
    double worst = 0.0;
    PointSampler sampler({}, static_cast<std::size_t>(n), gen.engine()());
    for (int k = 0; k < 8; ++k) {
      auto x = sampler.next();
      auto xp = x;
      auto xm = x;
      xp[static_cast<std::size_t>(var)] += h;
      xm[static_cast<std::size_t>(var)] -= h;
      double fd = (evaluate(e, xp) - evaluate(e, xm)) / (2 * h);
      worst = std::max(worst, std::abs(evaluate(de, x) - fd) / (1 + std::abs(fd)));
    }
    t.within(worst, 1e-6, case_name(i) + " " + to_string(e));
  }
  return t.done();
}

SuiteResult suite_simplify_identity(const SuiteConfig& cfg) {
  Tally t("symbolic-core", "simplify_identity");
  RandomInputs gen(stream_seed(cfg.seed, "simplify_identity"));
  for (std::size_t i = 0; i < 500; ++i) {
    int n = gen.uniform_int(1, 4);
    Expr e = i % 2 == 0 ? gen.polynomial(n, 4, 5) : gen.smooth(n);
    Expr diff = e - simplify(e);
    std::vector<Expr> one{diff};
    t.within(sampled_sup_norm(one, cfg.zt), cfg.zt.tol, case_name(i) + " " + to_string(e));
  }
  return t.done();
}

SuiteResult suite_parse_print_roundtrip(const SuiteConfig& cfg) {
  Tally t("symbolic-core", "parse_print_roundtrip");
  RandomInputs gen(stream_seed(cfg.seed, "parse_print_roundtrip"));
  for (std::size_t i = 0; i < 500; ++i) {
    int n = gen.uniform_int(1, 4);
    Expr e = i % 2 == 0 ? gen.polynomial(n, 4, 5) : gen.smooth(n);
    std::string text = to_string(e);
    t.guard(case_name(i), [&] {
      auto names = default_coordinates(n);
      Expr back = parse_expr(text, names);
      PointSampler sampler({}, static_cast<std::size_t>(n), gen.engine()());
      double worst = 0.0;
      for (int k = 0; k < 16; ++k) {
        auto x = sampler.next();
        double a = evaluate(e, x);
        worst = std::max(worst, std::abs(a - evaluate(back, x)) / (1 + std::abs(a)));
      }
      t.within(worst, 1e-12, case_name(i) + " '" + text + "'");
    });
  }
  return t.done();
}

// ---------------------------------------------------------------- forms

SuiteResult suite_dd_zero(const SuiteConfig& cfg) {
  Tally t("forms", "dd_zero");
  RandomInputs gen(stream_seed(cfg.seed, "dd_zero"));
  for (std::size_t i = 0; i < 300; ++i) {
    int n = gen.uniform_int(2, 4);
    int p = gen.uniform_int(0, 3);
    DifferentialForm f = gen.polynomial_form(n, p, 3);
    DifferentialForm ddf = exterior_derivative(exterior_derivative(f));
    t.within(sup(ddf, cfg.zt), cfg.zt.tol, case_name(i));
  }
  return t.done();
}

SuiteResult suite_graded_leibniz(const SuiteConfig& cfg) {
  Tally t("forms", "graded_leibniz");
  RandomInputs gen(stream_seed(cfg.seed, "graded_leibniz"));
  for (std::size_t i = 0; i < 200; ++i) {
    int n = gen.uniform_int(2, 4);
    int p = gen.uniform_int(0, std::min(3, n));
    int q = gen.uniform_int(0, std::min(3, n));
    DifferentialForm a = gen.polynomial_form(n, p, 3);
    DifferentialForm b = gen.polynomial_form(n, q, 3);
    DifferentialForm lhs = exterior_derivative(wedge(a, b));
    DifferentialForm rhs = wedge(exterior_derivative(a), b);
    DifferentialForm second = wedge(a, exterior_derivative(b));
    rhs = sign_power(p) > 0 ? rhs + second : rhs - second;
    t.within(sup(lhs - rhs, cfg.zt), cfg.zt.tol, case_name(i));
  }
  return t.done();
}

SuiteResult suite_anticommutativity(const SuiteConfig& cfg) {
  Tally t("forms", "anticommutativity");
  RandomInputs gen(stream_seed(cfg.seed, "anticommutativity"));
  for (std::size_t i = 0; i < 200; ++i) {
    int n = gen.uniform_int(2, 4);
    int p = gen.uniform_int(0, std::min(3, n));
    int q = gen.uniform_int(0, std::min(3, n));
    DifferentialForm a = gen.polynomial_form(n, p, 3);
    DifferentialForm b = gen.polynomial_form(n, q, 3);
    DifferentialForm ab = wedge(a, b);
    DifferentialForm ba = wedge(b, a);
    DifferentialForm diff = sign_power(p * q) > 0 ? ab - ba : ab + ba;
    t.within(sup(diff, cfg.zt), cfg.zt.tol, case_name(i));
  }
  return t.done();
}

SuiteResult suite_pullback_naturality(const SuiteConfig& cfg) {
  Tally t("forms", "pullback_naturality");
  RandomInputs gen(stream_seed(cfg.seed, "pullback_naturality"));
  for (std::size_t i = 0; i < 100; ++i) {
    int m = gen.uniform_int(1, 3);
    int n = gen.uniform_int(2, 4);
    CoordinateMap f{m, {}};
    for (int k = 0; k < n; ++k) f.components.push_back(gen.polynomial(m, 2, 3));
    int p = gen.uniform_int(0, std::min(3, n - 1));
    DifferentialForm theta = gen.polynomial_form(n, p, 2);
    DifferentialForm diff = pullback(f, exterior_derivative(theta)) - exterior_derivative(pullback(f, theta));
    t.within(sup(diff, cfg.zt), cfg.zt.tol, case_name(i));
  }
  return t.done();
}

SuiteResult suite_interior_product(const SuiteConfig& cfg) {
  Tally t("forms", "interior_product");
  RandomInputs gen(stream_seed(cfg.seed, "interior_product"));
  for (std::size_t i = 0; i < 100; ++i) {
    int n = gen.uniform_int(2, 4);
    VectorField v = gen.vector_field(n, 2);
    int p = gen.uniform_int(2, n);
    DifferentialForm theta = gen.polynomial_form(n, p, 2);
    t.within(sup(interior_product(v, interior_product(v, theta)), cfg.zt), cfg.zt.tol, case_name(i) + " iota^2");

    int a_deg = gen.uniform_int(1, n - 1);
    int b_deg = gen.uniform_int(1, n - a_deg);
    DifferentialForm a = gen.polynomial_form(n, a_deg, 2);
    DifferentialForm b = gen.polynomial_form(n, b_deg, 2);
    DifferentialForm lhs = interior_product(v, wedge(a, b));
    DifferentialForm first = wedge(interior_product(v, a), b);
    DifferentialForm second = wedge(a, interior_product(v, b));
    DifferentialForm rhs = sign_power(a_deg) > 0 ? first + second : first - second;
    t.within(sup(lhs - rhs, cfg.zt), cfg.zt.tol, case_name(i) + " antiderivation");
  }
  return t.done();
}

// ---------------------------------------------------------------- geometry

SuiteResult suite_levi_civita_commutator(const SuiteConfig& cfg) {
  Tally t("geometry", "levi_civita_commutator");
  RandomInputs gen(stream_seed(cfg.seed, "levi_civita_commutator"));
  for (std::size_t i = 0; i < 50; ++i) {
    int n = gen.uniform_int(2, 3);
    ExprMatrix g = gen.positive_definite_metric(n, 1);
    DifferentialForm a = gen.polynomial_form(n, 1, 3);
    t.guard(case_name(i), [&] {
      Chart c = metric_chart(n, g, cfg.zt);
      CommutatorReport r = connection_commutator(a, c, cfg.seed);
      double torsion_part = sup(r.torsion_part, cfg.zt);
      double mismatch = sup(r.total - exterior_derivative(a), cfg.zt);
      t.within(std::max(torsion_part, mismatch), cfg.zt.tol, case_name(i));
    });
  }
  return t.done();
}

SuiteResult suite_torsion_linearity(const SuiteConfig& cfg) {
  Tally t("geometry", "torsion_linearity");
  RandomInputs gen(stream_seed(cfg.seed, "torsion_linearity"));
  for (std::size_t i = 0; i < 20; ++i) {
    int n = gen.uniform_int(2, 3);
    bool symmetric = i % 2 == 0;
    Connection conn(n);
    for (int s = 0; s < n; ++s) {
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
          if (symmetric && a < b) {
            conn(s, b, a) = conn(s, a, b);
          } else {
            conn(s, b, a) = gen.polynomial(n, 1, 2);
          }
        }
      }
    }
    DifferentialForm a = gen.polynomial_form(n, 1, 2);
    DifferentialForm b = gen.polynomial_form(n, 1, 2);
    Expr ca(gen.uniform_int(-3, 3));
    Expr cb(gen.uniform_int(-3, 3));
    t.guard(case_name(i), [&] {
      Chart c(default_coordinates(n), std::nullopt, conn, {}, cfg.zt);
      auto k = [&](const DifferentialForm& f) { return connection_commutator(f, c, cfg.seed).total; };
      DifferentialForm lin = k(ca * a + cb * b) - (ca * k(a) + cb * k(b));
      t.within(sup(lin, cfg.zt), cfg.zt.tol, case_name(i) + " linearity");

      Connection tor = torsion(c);
      std::vector<Expr> entries(tor.data().begin(), tor.data().end());
      bool torsion_free = all_identically_zero(entries, cfg.zt);
      DifferentialForm probe = DifferentialForm::one_form(std::vector<Expr>(static_cast<std::size_t>(n), Expr(1)));
      probe = probe + a;
      bool part_zero = is_zero_form(connection_commutator(probe, c, cfg.seed).torsion_part, cfg.zt);
      t.check(torsion_free == symmetric && part_zero == torsion_free, 0.0,
              case_name(i) + " torsion_part vanishing does not track torsion");
    });
  }
  return t.done();
}

namespace {

struct HandConnection {
  int dim;
  std::vector<std::tuple<int, int, int, std::string>> entries;  // sigma, beta, alpha, Gamma^sigma_{beta alpha}
  std::vector<int> a;                                            // constant 1-form coefficients
};

std::vector<HandConnection> hand_connections() {
  return {
      {2, {{0, 0, 1, "x"}}, {1, 0}},
      {2, {{0, 1, 0, "x"}}, {1, 0}},
      {2, {{1, 0, 1, "y"}}, {0, 1}},
      {2, {{0, 0, 1, "x*y"}, {1, 0, 1, "1"}}, {2, -1}},
      {2, {{0, 0, 1, "sin(x)"}}, {3, 5}},
      {2, {{1, 1, 0, "exp(y)"}}, {1, 1}},
      {2, {{0, 0, 1, "x^2 - y"}, {0, 1, 0, "y"}}, {-2, 4}},
      {2, {{1, 0, 1, "2"}, {1, 1, 0, "-3"}}, {0, 7}},
      {2, {{0, 1, 0, "cos(x + y)"}, {1, 0, 1, "x"}}, {1, -1}},
      {2, {{0, 0, 1, "1 + x^2"}, {1, 0, 0, "y"}}, {1, 2}},
      {3, {{0, 1, 2, "x"}}, {1, 0, 0}},
      {3, {{2, 0, 1, "z"}}, {0, 0, 1}},
      {3, {{1, 2, 0, "x*z"}, {0, 1, 2, "y"}}, {1, 1, 1}},
      {3, {{0, 0, 1, "1"}, {1, 1, 2, "2"}, {2, 2, 0, "3"}}, {1, 2, 3}},
      {3, {{0, 1, 0, "sin(z)"}, {2, 1, 2, "cos(y)"}}, {-1, 0, 2}},
      {3, {{1, 0, 2, "x + y + z"}}, {0, 5, 0}},
      {3, {{2, 2, 1, "x^2"}, {2, 1, 2, "y^2"}}, {0, 0, -1}},
      {3, {{0, 2, 1, "exp(x)"}, {1, 2, 0, "1"}}, {2, 2, 0}},
      {3, {{0, 0, 2, "y*z"}, {1, 1, 2, "x*z"}, {2, 0, 1, "x*y"}}, {1, -1, 1}},
      {3, {{0, 1, 2, "x"}, {0, 2, 1, "x"}, {1, 0, 2, "y"}}, {4, 3, 2}},
  };
}

}  // namespace

SuiteResult suite_torsion_activation(const SuiteConfig& cfg) {
  Tally t("geometry", "torsion_activation");
  auto cases = hand_connections();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const HandConnection& hc = cases[i];
    t.guard(case_name(i), [&] {
      int n = hc.dim;
      auto names = default_coordinates(n);
      Connection conn(n);
      std::vector<std::tuple<int, int, int, Expr>> parsed;
      for (const auto& [s, b, a, text] : hc.entries) {
        Expr g = parse_expr(text, names);
        conn(s, b, a) = g;
        parsed.emplace_back(s, b, a, g);
      }
      Chart c(names, std::nullopt, conn, {}, cfg.zt);
      std::vector<Expr> coeffs;
      for (int v : hc.a) coeffs.emplace_back(v);
      CommutatorReport r = connection_commutator(DifferentialForm::one_form(coeffs), c, cfg.seed);

      bool derivative_zero = r.derivative_part.is_zero();
      double split = sup(r.total - r.torsion_part, cfg.zt);

      // Contract by hand: entry G^s_{b a} adds +G a_s to K_{ab} when (b, a)
      // runs against the (alpha < beta) order, and -G a_s otherwise.
      double worst = 0.0;
      PointSampler sampler({}, static_cast<std::size_t>(n), stream_seed(cfg.seed, "torsion_activation") + i);
      for (int k = 0; k < 8; ++k) {
        auto x = sampler.next();
        for (int alpha = 0; alpha < n; ++alpha) {
          for (int beta = alpha + 1; beta < n; ++beta) {
            double hand = 0.0;
            for (const auto& [s, b, a, g] : parsed) {
              double as = hc.a[static_cast<std::size_t>(s)];
              if (b == beta && a == alpha) hand += evaluate(g, x) * as;
              if (b == alpha && a == beta) hand -= evaluate(g, x) * as;
            }
            double got = evaluate(r.torsion_part.coefficient({alpha, beta}), x);
            worst = std::max(worst, std::abs(got - hand));
          }
        }
      }
      t.check(derivative_zero && split <= cfg.zt.tol && worst <= 1e-12, std::max(split, worst),
              case_name(i) + " split " + Tally::fmt(split) + " contraction " + Tally::fmt(worst));
    });
  }
  return t.done();
}

SuiteResult suite_hodge_laws(const SuiteConfig& cfg) {
  Tally t("geometry", "hodge_laws");
  RandomInputs gen(stream_seed(cfg.seed, "hodge_laws"));
  ZeroTest loose = cfg.zt.with_tol(std::max(cfg.zt.tol, 1e-8));

  auto pick_metric = [&](std::size_t i, int n) -> ExprMatrix {
    switch (i % 4) {
      case 0: return diagonal(std::vector<Expr>(static_cast<std::size_t>(n), Expr(1)));
      case 1: return gen.constant_metric(n);
      case 2: return minkowski(n);
      default: return n <= 3 ? gen.positive_definite_metric(n, 1) : gen.constant_metric(n);
    }
  };

  for (std::size_t i = 0; i < 50; ++i) {
    int n = gen.uniform_int(2, 4);
    int p = gen.uniform_int(0, n);
    ExprMatrix g = pick_metric(i, n);
    DifferentialForm f = gen.polynomial_form(n, p, 2);
    t.guard("involution " + case_name(i), [&] {
      Chart c = metric_chart(n, g, cfg.zt);
      int s = c.determinant_sign() * sign_power(p * (n - p));
      DifferentialForm twice = hodge_star(hodge_star(f, c), c);
      DifferentialForm diff = s > 0 ? twice - f : twice + f;
      t.within(sup(diff, loose), loose.tol, "involution " + case_name(i));
    });
  }
  for (std::size_t i = 0; i < 50; ++i) {
    int n = gen.uniform_int(2, 3);
    int p = gen.uniform_int(1, n);
    ExprMatrix g = pick_metric(i, n);
    DifferentialForm f = gen.polynomial_form(n, p, 2);
    t.guard("delta squared " + case_name(i), [&] {
      Chart c = metric_chart(n, g, cfg.zt);
      t.within(sup(codifferential(codifferential(f, c), c), loose), loose.tol, "delta squared " + case_name(i));
    });
  }
  for (std::size_t i = 0; i < 50; ++i) {
    int n = gen.uniform_int(2, 3);
    int p = gen.uniform_int(0, n - 1);
    ExprMatrix g = i % 4 == 3 ? gen.constant_metric(n) : pick_metric(i, n);
    DifferentialForm f = gen.polynomial_form(n, p, 3);
    t.guard("laplacian commutes with d " + case_name(i), [&] {
      Chart c = metric_chart(n, g, cfg.zt);
      DifferentialForm diff = laplace_derham(exterior_derivative(f), c) - exterior_derivative(laplace_derham(f, c));
      t.within(sup(diff, loose), loose.tol, "laplacian commutes with d " + case_name(i));
    });
  }

  t.guard("laplacian of x^2 + y^2", [&] {
    Chart c = metric_chart(2, diagonal({Expr(1), Expr(1)}), cfg.zt);
    auto x = c.symbols();
    DifferentialForm lap = laplace_derham(DifferentialForm::scalar(2, x[0] * x[0] + x[1] * x[1]), c);
    DifferentialForm target = DifferentialForm::scalar(2, Expr(-4));
    t.within(sup(lap - target, cfg.zt), 1e-9, "laplacian of x^2 + y^2");
  });
  t.guard("plane wave", [&] {
    Chart c(std::vector<std::string>{"t", "x", "y", "z"}, minkowski(4), std::nullopt, {}, cfg.zt);
    auto x = c.symbols();
    DifferentialForm wave = DifferentialForm::scalar(4, sin(x[3] - x[0]));
    t.within(sup(laplace_derham(wave, c), cfg.zt), 1e-9, "plane wave");
  });
  return t.done();
}

SuiteResult suite_bianchi(const SuiteConfig& cfg) {
  Tally t("geometry", "bianchi");
  ZeroTest zt = cfg.zt.with_tol(std::max(cfg.zt.tol, 1e-7));
  struct MetricCase {
    std::vector<std::string> coords;
    std::vector<std::vector<std::string>> g;
  };
  const std::vector<MetricCase> metrics = {
      {{"x", "y"}, {{"1", "0"}, {"0", "1 + x^2/10"}}},
      {{"x", "y", "z"}, {{"1", "0", "0"}, {"0", "1 + x^2/10", "0"}, {"0", "0", "1"}}},
      {{"x", "y", "z"}, {{"1 + y^2/10", "0", "0"}, {"0", "1 + z^2/10", "0"}, {"0", "0", "1 + x^2/10"}}},
      {{"x", "y", "z"}, {{"1", "x*y/10", "0"}, {"x*y/10", "1", "0"}, {"0", "0", "1 + z^2/10"}}},
  };
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    t.guard("metric " + case_name(i), [&] {
      int n = static_cast<int>(metrics[i].coords.size());
      ExprMatrix g(n);
      for (int r = 0; r < n; ++r) {
        for (int col = 0; col < n; ++col) {
          g(r, col) = parse_expr(metrics[i].g[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)], metrics[i].coords);
        }
      }
      Chart c(metrics[i].coords, g, std::nullopt, {}, zt);
      BianchiReport b = bianchi_check(c, zt);
      double worst = std::max(b.first_residual, b.second_residual);
      t.check(b.ok() && worst < 1e-7, worst, "metric " + case_name(i) + " residual " + Tally::fmt(worst));
    });
  }
  t.guard("negative control", [&] {
    std::vector<std::string> coords{"x", "y", "z"};
    Connection conn(3);
    conn(0, 1, 2) = Expr::symbol(0, "x");
    Chart c(coords, std::nullopt, conn, {}, zt);
    BianchiReport b = bianchi_check(c, zt);
    t.check(!b.first_ok && b.first_residual > 0.5, 0.0,
            "negative control not flagged, first residual " + Tally::fmt(b.first_residual));
  });
  return t.done();
}

// ---------------------------------------------------------------- closure-analysis

SuiteResult suite_poincare_roundtrip(const SuiteConfig& cfg) {
  Tally t("closure-analysis", "poincare_roundtrip");
  RandomInputs gen(stream_seed(cfg.seed, "poincare_roundtrip"));
  std::size_t quadrature_cases = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    int n = gen.uniform_int(2, 4);
    bool smooth = i % 5 == 4;
    DifferentialForm alpha(n, 0);
    DifferentialForm theta(n, 1);
    for (int attempt = 0; attempt < 20 && theta.is_zero(); ++attempt) {
      int q = gen.uniform_int(0, std::min(2, n - 1));
      alpha = smooth ? gen.smooth_form(n, q) : gen.polynomial_form(n, q, 3);
      theta = exterior_derivative(alpha);
    }
    bool polynomial = std::all_of(theta.terms().begin(), theta.terms().end(), [&](const auto& kv) {
      return to_polynomial(kv.second, static_cast<std::size_t>(n)).has_value();
    });
    if (!polynomial) ++quadrature_cases;
    t.guard(case_name(i), [&] {
      ClosureReport rep = classify_form(theta, std::nullopt, cfg.zt);
      if (rep.classification != Closure::Exact || !rep.potential) {
        t.check(false, 0.0, case_name(i) + " classified " + std::string(closure_name(rep.classification)));
        return;
      }
      DifferentialForm diff = exterior_derivative(*rep.potential) - theta;
      double residual = sup(diff, cfg.zt);
      // Potentials may differ from alpha by a closed form.
      double gauge = sup(exterior_derivative(*rep.potential - alpha), cfg.zt);
      double limit = polynomial ? cfg.zt.tol : 1e-6;
      t.check(residual <= limit && gauge <= limit, std::max(residual, gauge),
              case_name(i) + " residual " + Tally::fmt(residual) + " gauge " + Tally::fmt(gauge));
    });
  }
  t.check(quadrature_cases > 0, 0.0, "no case exercised the quadrature path");
  return t.done();
}

namespace {

// Graph pseudostructure x_j = P_j(x_0..x_{k-1}) for j >= k, parametrized by
// the first k coordinates.
Pseudostructure random_graph(RandomInputs& gen, int n, int k, const ZeroTest& zt) {
  auto names = default_coordinates(n);
  auto x = coordinate_symbols(names);
  std::vector<std::string> params;
  for (int i = 0; i < k; ++i) params.push_back("u" + std::to_string(i));
  auto u = coordinate_symbols(params);
  std::vector<Expr> map;
  std::vector<Expr> constraints;
  for (int i = 0; i < k; ++i) map.push_back(u[static_cast<std::size_t>(i)]);
  for (int j = k; j < n; ++j) {
    Expr pj = gen.polynomial(k, 2, 3);
    map.push_back(pj);
    constraints.push_back(x[static_cast<std::size_t>(j)] - pj);
  }
  Parametrization par{params, map, {}};
  return Pseudostructure(names, {}, constraints, par, zt);
}

}  // namespace

SuiteResult suite_restriction_naturality(const SuiteConfig& cfg) {
  Tally t("closure-analysis", "restriction_naturality");
  RandomInputs gen(stream_seed(cfg.seed, "restriction_naturality"));
  for (std::size_t i = 0; i < 100; ++i) {
    int n = gen.uniform_int(2, 4);
    int k = gen.uniform_int(1, n - 1);
    int p = gen.uniform_int(0, std::min(3, n - 1));
    DifferentialForm theta = gen.polynomial_form(n, p, 2);
    t.guard(case_name(i), [&] {
      Pseudostructure ps = random_graph(gen, n, k, cfg.zt);
      DifferentialForm diff =
          restrict_to_pseudostructure(exterior_derivative(theta), ps) - exterior_derivative(restrict_to_pseudostructure(theta, ps));
      t.within(sup(diff, ps.require_parametrization().sampling(cfg.zt)), cfg.zt.tol, case_name(i));
    });
  }
  return t.done();
}

SuiteResult suite_dual_form_pair(const SuiteConfig& cfg) {
  Tally t("closure-analysis", "dual_form_pair");
  std::vector<std::string> plane{"x", "y"};
  auto x = coordinate_symbols(plane);
  Expr phi = Expr::symbol(0, "phi");
  Chart euclid(plane, diagonal({Expr(1), Expr(1)}), std::nullopt, {}, cfg.zt);

  t.guard("circle", [&] {
    Pseudostructure circle(plane, {}, {x[0] * x[0] + x[1] * x[1] - Expr(1)},
                           Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}}, cfg.zt);
    DifferentialForm rot = DifferentialForm::one_form({-x[1], x[0]});
    DualFormReport r = dual_form_check(circle, euclid, rot, cfg.zt);
    double worst = std::max(r.closure_residual, r.dual_residual);
    t.check(r.exact_conservation() && worst < 1e-9, worst, "circle residual " + Tally::fmt(worst));
  });
  t.guard("constant form on a line", [&] {
    Expr s = Expr::symbol(0, "s");
    Pseudostructure line(plane, {}, {Expr(2) * x[0] - x[1]}, Parametrization{{"s"}, {s, Expr(2) * s}, {}}, cfg.zt);
    DifferentialForm c = DifferentialForm::one_form({Expr(3), Expr(-1)});
    DualFormReport r = dual_form_check(line, euclid, c, cfg.zt);
    t.check(r.exact_conservation(), std::max(r.closure_residual, r.dual_residual), "constant form on a line");
  });
  t.guard("negative control", [&] {
    std::vector<std::string> space{"x", "y", "z"};
    auto xs = coordinate_symbols(space);
    std::vector<std::string> params{"u", "v"};
    auto uv = coordinate_symbols(params);
    Chart c3(space, diagonal({Expr(1), Expr(1), Expr(1)}), std::nullopt, {}, cfg.zt);
    Pseudostructure z0(space, {}, {xs[2]}, Parametrization{params, {uv[0], uv[1], Expr()}, {}}, cfg.zt);
    DifferentialForm ydx = DifferentialForm::one_form({xs[1], Expr(), Expr()});
    DualFormReport r = dual_form_check(z0, c3, ydx, cfg.zt);
    t.check(!r.closed && r.closure_residual > 0.5, r.dual_residual, "y dx on z = 0 not flagged");
  });
  return t.done();
}

// ---------------------------------------------------------------- evolution

SuiteResult suite_gradient_identical(const SuiteConfig& cfg) {
  Tally t("evolution", "gradient_identical");
  RandomInputs gen(stream_seed(cfg.seed, "gradient_identical"));
  for (std::size_t i = 0; i < 100; ++i) {
    int n = gen.uniform_int(2, 4);
    Expr psi = i % 4 == 3 ? gen.smooth(n) : gen.polynomial(n, 3, 5);
    t.guard(case_name(i), [&] {
      std::vector<Expr> actions;
      for (int k = 0; k < n; ++k) actions.push_back(differentiate(psi, k));
      MaterialSystemSpec spec{Chart(default_coordinates(n)), DifferentialForm::scalar(n, psi), actions, std::nullopt, 1};
      EvolutionaryRelation rel = build_relation(spec, cfg.zt);
      double norm = nonidentity_norm(rel, cfg.seed);
      double balance = sup(rel.lhs - rel.rhs, cfg.zt);
      t.check(rel.identical && balance <= cfg.zt.tol, std::max(norm, balance), case_name(i));
    });
  }
  return t.done();
}

SuiteResult suite_perturbation_linearity(const SuiteConfig& cfg) {
  Tally t("evolution", "perturbation_linearity");
  RandomInputs gen(stream_seed(cfg.seed, "perturbation_linearity"));
  const double eps_values[] = {1e-3, 1e-2, 0.1, 0.25, 0.5, 1.0, 3.0};
  for (std::size_t i = 0; i < 28; ++i) {
    int n = gen.uniform_int(2, 4);
    double eps = eps_values[i % std::size(eps_values)];
    Expr psi = gen.polynomial(n, 3, 5);
    t.guard(case_name(i), [&] {
      auto x = coordinate_symbols(default_coordinates(n));
      Expr e(Number::recognize(eps, 1000000, 0.0));
      std::vector<Expr> actions;
      for (int k = 0; k < n; ++k) actions.push_back(differentiate(psi, k));
      actions[0] = actions[0] - e * x[1];
      actions[1] = actions[1] + e * x[0];
      MaterialSystemSpec spec{Chart(default_coordinates(n)), DifferentialForm::scalar(n, psi), actions, std::nullopt, 1};
      double norm = nonidentity_norm(build_relation(spec, cfg.zt), cfg.seed);
      t.within(std::abs(norm - 2 * eps), 1e-9, case_name(i) + " eps " + Tally::fmt(eps));
    });
  }
  return t.done();
}

SuiteResult suite_identical_extraction(const SuiteConfig& cfg) {
  Tally t("evolution", "identical_extraction");
  std::vector<std::string> plane{"xi1", "xi2"};
  auto xi = coordinate_symbols(plane);
  Expr phi = Expr::symbol(0, "phi");
  Pseudostructure circle(plane, {}, {xi[0] * xi[0] + xi[1] * xi[1] - Expr(1)},
                         Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}}, cfg.zt);

  t.guard("rotation on the unit circle", [&] {
    MaterialSystemSpec spec{Chart(plane), std::nullopt, std::vector<Expr>{-xi[1], xi[0]}, std::nullopt, 1};
    EvolutionaryRelation rel = build_relation(spec, cfg.zt);
    double before = nonidentity_norm(rel, cfg.seed);
    IdenticalRelation id = extract_identical_relation(rel, circle, cfg.zt);
    double after = nonidentity_norm(rel, cfg.seed);
    DifferentialForm dphi = DifferentialForm::one_form({Expr(1)});
    double form_error = sup(id.restricted - dphi, circle.require_parametrization().sampling(cfg.zt));
    bool named = to_string(id.potential.coefficient({})) == "phi";
    double worst = std::max({id.residual, form_error, std::abs(before - 2.0), std::abs(after - before)});
    t.check(!rel.identical && named && worst < 1e-9, worst,
            "rotation: potential '" + to_string(id.potential.coefficient({})) + "' worst " + Tally::fmt(worst));
  });

  t.guard("line xi2 = xi1", [&] {
    Expr s = Expr::symbol(0, "t");
    Pseudostructure line(plane, {}, {xi[1] - xi[0]}, Parametrization{{"t"}, {s, s}, {}}, cfg.zt);
    MaterialSystemSpec spec{Chart(plane), std::nullopt, std::vector<Expr>{xi[1], Expr()}, std::nullopt, 1};
    IdenticalRelation id = extract_identical_relation(build_relation(spec, cfg.zt), line, cfg.zt);
    DifferentialForm half = DifferentialForm::scalar(1, s * s / Expr(2));
    double gap = sup(exterior_derivative(id.potential - half), cfg.zt);
    t.check(id.residual <= cfg.zt.tol && gap <= cfg.zt.tol, std::max(id.residual, gap), "line potential");
  });

  RandomInputs gen(stream_seed(cfg.seed, "identical_extraction"));
  for (std::size_t i = 0; i < 30; ++i) {
    int n = gen.uniform_int(2, 4);
    int k = gen.uniform_int(1, n - 1);
    Expr psi = gen.polynomial(n, 3, 4);
    t.guard("gradient " + case_name(i), [&] {
      std::vector<Expr> actions;
      for (int j = 0; j < n; ++j) actions.push_back(differentiate(psi, j));
      MaterialSystemSpec spec{Chart(default_coordinates(n)), DifferentialForm::scalar(n, psi), actions, std::nullopt, 1};
      EvolutionaryRelation rel = build_relation(spec, cfg.zt);
      Pseudostructure ps = random_graph(gen, n, k, cfg.zt);
      IdenticalRelation id = extract_identical_relation(rel, ps, cfg.zt);
      // The potential matches psi restricted up to a constant.
      DifferentialForm psi_pi = restrict_to_pseudostructure(DifferentialForm::scalar(n, psi), ps);
      ZeroTest local = ps.require_parametrization().sampling(cfg.zt);
      double gap = sup(exterior_derivative(id.potential - psi_pi), local);
      t.check(id.residual <= cfg.zt.tol && gap <= cfg.zt.tol, std::max(id.residual, gap), "gradient " + case_name(i));
    });
  }

  t.guard("rotation on a random line", [&] {
    // Extraction on a line through the rotation field keeps the total relation nonidentical.
    MaterialSystemSpec spec{Chart(plane), std::nullopt, std::vector<Expr>{-xi[1], xi[0]}, std::nullopt, 1};
    EvolutionaryRelation rel = build_relation(spec, cfg.zt);
    Expr s = Expr::symbol(0, "s");
    Pseudostructure line(plane, {}, {xi[1] - Expr(3) * xi[0] - Expr(1)}, Parametrization{{"s"}, {s, Expr(3) * s + Expr(1)}, {}},
                         cfg.zt);
    IdenticalRelation id = extract_identical_relation(rel, line, cfg.zt);
    double after = nonidentity_norm(rel, cfg.seed);
    t.check(id.residual <= cfg.zt.tol && std::abs(after - 2.0) <= 1e-9, id.residual, "rotation on a line");
  });

  t.guard("cascade", [&] {
    std::vector<std::string> space{"xi1", "xi2", "xi3"};
    auto x = coordinate_symbols(space);
    DifferentialForm w = DifferentialForm::monomial(3, {0, 1}, Expr(1));
    MaterialSystemSpec spec{Chart(space), std::nullopt, std::nullopt, w, 2};
    EvolutionaryRelation rel = build_relation(spec, cfg.zt);
    std::vector<std::string> uv{"u", "v"};
    auto u = coordinate_symbols(uv);
    Pseudostructure plane3(space, {}, {x[2]}, Parametrization{uv, {u[0], u[1], Expr()}, {}}, cfg.zt);
    Pseudostructure ring(uv, {}, {u[0] * u[0] + u[1] * u[1] - Expr(1)}, Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}},
                         cfg.zt);
    CascadeReport rep = integration_cascade(rel, {plane3, ring}, cfg.zt);
    double worst = 0.0;
    for (const auto& st : rep.stages) worst = std::max(worst, st.residual);
    bool ks = rep.k_values == std::vector<int>{2, 1, 0};
    t.check(rep.complete && ks && worst < 1e-8, worst, "cascade: " + rep.message);
  });
  return t.done();
}

SuiteResult suite_degeneracy_loci(const SuiteConfig& cfg) {
  Tally t("evolution", "degeneracy_loci");
  int grid = cfg.grid;
  t.guard("circle", [&] {
    Chart c({"x", "y"});
    auto x = c.symbols();
    auto loci = find_degeneracy_loci(RawFunctional{x[0] * x[0] + x[1] * x[1] - Expr(1)}, c, grid);
    double h = 4.0 / (grid - 1);
    double err = loci.size() == 1 ? hausdorff_to_circle(loci[0].points(), 1.0) : std::numeric_limits<double>::infinity();
    t.check(err < 2 * h, err, "circle: " + std::to_string(loci.size()) + " components, error " + Tally::fmt(err));
  });
  t.guard("poisson bracket", [&] {
    Chart c({"q", "p"});
    auto x = c.symbols();
    Expr hamiltonian = (x[1] * x[1] + x[0] * x[0]) / Expr(2);
    auto loci = find_degeneracy_loci(PoissonFunctional{hamiltonian, x[0], {{0, 1}}}, c, grid);
    double worst = 0.0;
    bool on_grid = loci.size() == 1;
    std::size_t count = 0;
    for (const auto& ps : loci) {
      for (const auto& pt : ps.points()) {
        ++count;
        worst = std::max(worst, std::abs(pt[1]));
        double k = (pt[0] + 2.0) * (grid - 1) / 4.0;
        double node = std::round(k);
        double exact = node + 1 == grid ? 2.0 : -2.0 + node * 4.0 / (grid - 1);
        on_grid = on_grid && pt[0] == exact;
      }
    }
    t.check(on_grid && worst <= 1e-12 && count == static_cast<std::size_t>(grid), worst,
            "poisson locus off p = 0 or off grid lines");
  });
  t.guard("jacobian", [&] {
    Chart c({"x", "y"});
    auto x = c.symbols();
    auto loci = find_degeneracy_loci(JacobianFunctional{{x[0] * x[0], x[1]}}, c, grid);
    double worst = 0.0;
    for (const auto& ps : loci) {
      for (const auto& pt : ps.points()) worst = std::max(worst, std::abs(pt[0]));
    }
    t.check(loci.size() == 1 && worst <= 1e-12, worst, "jacobian locus off x = 0");
  });
  t.guard("no sign change", [&] {
    Chart c({"x", "y"});
    auto x = c.symbols();
    auto loci = find_degeneracy_loci(RawFunctional{x[0] * x[0] + Expr(1)}, c, grid);
    t.check(loci.empty(), 0.0, "positive functional produced a locus");
  });
  return t.done();
}

SuiteResult suite_classify_arithmetic(const SuiteConfig&) {
  Tally t("evolution", "classify_arithmetic");
  for (int p = 0; p <= 3; ++p) {
    for (int k = 0; k <= p; ++k) {
      for (int n = k; n <= 6; ++n) {
        StructureClass s = classify_structure(p, k, n);
        t.check(s.pseudostructure_dim + s.k == n && s.pseudostructure_dim >= 0, 0.0,
                "classify " + std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(n));
      }
    }
  }
  for (auto [p, k, n] : std::vector<std::tuple<int, int, int>>{{1, 2, 4}, {4, 1, 4}, {2, 2, 1}, {1, -1, 3}}) {
    bool threw = false;
    try {
      classify_structure(p, k, n);
    } catch (const DimensionError&) {
      threw = true;
    }
    t.check(threw, 0.0, "bounds violation accepted");
  }
  return t.done();
}

SuiteResult suite_example_corpus(const SuiteConfig& cfg) {
  Tally t("evolution", "example_corpus");
  for (const std::string& name : example_names()) {
    t.guard(name, [&] {
      ExampleReport r = run_example(name, cfg.zt, cfg.grid);
      t.check(r.passed, 0.0, name + " failed");
    });
  }
  return t.done();
}

const std::vector<SuiteEntry>& invariant_suites() {
  static const std::vector<SuiteEntry> suites = {
      {"symbolic-core", "derivative_vs_difference", suite_derivative_vs_difference},
      {"symbolic-core", "simplify_identity", suite_simplify_identity},
      {"symbolic-core", "parse_print_roundtrip", suite_parse_print_roundtrip},
      {"forms", "dd_zero", suite_dd_zero},
      {"forms", "graded_leibniz", suite_graded_leibniz},
      {"forms", "anticommutativity", suite_anticommutativity},
      {"forms", "pullback_naturality", suite_pullback_naturality},
      {"forms", "interior_product", suite_interior_product},
      {"geometry", "levi_civita_commutator", suite_levi_civita_commutator},
      {"geometry", "torsion_linearity", suite_torsion_linearity},
      {"geometry", "torsion_activation", suite_torsion_activation},
      {"geometry", "hodge_laws", suite_hodge_laws},
      {"geometry", "bianchi", suite_bianchi},
      {"closure-analysis", "poincare_roundtrip", suite_poincare_roundtrip},
      {"closure-analysis", "restriction_naturality", suite_restriction_naturality},
      {"closure-analysis", "dual_form_pair", suite_dual_form_pair},
      {"evolution", "gradient_identical", suite_gradient_identical},
      {"evolution", "perturbation_linearity", suite_perturbation_linearity},
      {"evolution", "identical_extraction", suite_identical_extraction},
      {"evolution", "degeneracy_loci", suite_degeneracy_loci},
      {"evolution", "classify_arithmetic", suite_classify_arithmetic},
      {"evolution", "example_corpus", suite_example_corpus},
  };
  return suites;
}

SuiteResult run_suite(std::string_view name, const SuiteConfig& cfg) {
  for (const SuiteEntry& s : invariant_suites()) {
    if (s.name == name) return s.run(cfg);
  }
  throw Error("unknown suite: " + std::string(name));
}

}  // namespace evoform
