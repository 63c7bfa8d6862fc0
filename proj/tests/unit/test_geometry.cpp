#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "evoform/error.hpp"
#include "evoform/form.hpp"
#include "evoform/geometry.hpp"
#include "evoform/random.hpp"
#include "evoform/sampling.hpp"

using namespace evoform;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kPolar{"r", "theta"};

ExprMatrix diag(std::vector<Expr> d) {
  ExprMatrix g(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) g(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return g;
}

Chart euclid(int n) {
  std::vector<Expr> ones(static_cast<std::size_t>(n), Expr(1));
  return Chart(default_coordinates(n), diag(ones), std::nullopt);
}

Chart polar() {
  Expr r = Expr::symbol(0, "r");
  return Chart(kPolar, diag({Expr(1), r * r}), std::nullopt, SampleBox{{0.5, 2.0}, {-3.0, 3.0}});
}

bool same_form(const DifferentialForm& a, const DifferentialForm& b, const ZeroTest& zt = {}) {
  return is_zero_form(a - b, zt);
}

}  // namespace

TEST(Christoffel, EuclideanVanishes) {
  Connection g = christoffel_from_metric(euclid(3));
  for (const Expr& e : g.data()) EXPECT_TRUE(e.is_zero());
}

TEST(Christoffel, PolarAgainstFiniteDifferences) {
  Chart c = polar();
  Connection gamma = christoffel_from_metric(c);
  // Metric as plain functions; Gamma^s_ab = 1/2 g^{sl} (d_a g_lb + d_b g_la - d_l g_ab).
  auto metric = [](int i, int j, const std::vector<double>& p) {
    if (i != j) return 0.0;
    return i == 0 ? 1.0 : p[0] * p[0];
  };
  auto dmetric = [&](int i, int j, int l, std::vector<double> p) {
    const double h = 1e-5;
    std::vector<double> a = p, b = p;
    a[static_cast<std::size_t>(l)] += h;
    b[static_cast<std::size_t>(l)] -= h;
    return (metric(i, j, a) - metric(i, j, b)) / (2 * h);
  };
  PointSampler sampler(c.box(), 2, 99);
  for (int k = 0; k < 8; ++k) {
    auto p = sampler.next();
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          double fd = 0.0;
          for (int l = 0; l < 2; ++l) {
            double ginv = s == l ? 1.0 / metric(s, s, p) : 0.0;
            fd += 0.5 * ginv * (dmetric(l, b, a, p) + dmetric(l, a, b, p) - dmetric(a, b, l, p));
          }
          EXPECT_NEAR(evaluate(gamma(s, a, b), p), fd, 1e-7) << s << a << b;
        }
      }
    }
    EXPECT_NEAR(evaluate(gamma(0, 1, 1), p), -p[0], 1e-12);
    EXPECT_NEAR(evaluate(gamma(1, 0, 1), p), 1.0 / p[0], 1e-12);
  }
}

TEST(Christoffel, LeviCivitaIsSymmetric) {
  RandomInputs gen(17);
  for (int i = 0; i < 5; ++i) {
    Chart c(default_coordinates(3), gen.positive_definite_metric(3, 1), std::nullopt);
    Connection t = torsion(c);
    EXPECT_TRUE(all_identically_zero(t.data()));
  }
}

TEST(Torsion, HandSetConnection) {
  Expr x = Expr::symbol(0, "x");
  Connection g(2);
  g(0, 0, 1) = x;
  Chart c(kXY, std::nullopt, g);
  Connection t = torsion(c);
  EXPECT_TRUE(is_identically_zero(t(0, 0, 1) - x));
  EXPECT_TRUE(is_identically_zero(t(0, 1, 0) + x));
}

TEST(Commutator, GradientHasNoCommutator) {
  Expr x = Expr::symbol(0, "x");
  Expr y = Expr::symbol(1, "y");
  DifferentialForm a = exterior_derivative(DifferentialForm::scalar(2, sin(x * y) + x * x));
  CommutatorReport r = connection_commutator(a, euclid(2));
  EXPECT_TRUE(is_zero_form(r.derivative_part, ZeroTest{}));
  EXPECT_TRUE(r.torsion_part.is_zero());
}

TEST(Commutator, ConstantFormWithTorsion) {
  Expr x = Expr::symbol(0, "x");
  Connection g(2);
  g(0, 0, 1) = x;
  Chart c(kXY, std::nullopt, g);
  CommutatorReport r = connection_commutator(DifferentialForm::one_form({Expr(1), Expr(0)}), c);
  EXPECT_TRUE(r.derivative_part.is_zero());
  // (Gamma^s_{10} - Gamma^s_{01}) a_s = -x.
  DifferentialForm expected = DifferentialForm::monomial(2, {0, 1}, -x);
  EXPECT_TRUE(same_form(r.torsion_part, expected));
  EXPECT_TRUE(same_form(r.total, expected));
  ZeroTest zt;
  PointSampler sampler(zt.box, 2, 1);
  for (int k = 0; k < 8; ++k) {
    auto p = sampler.next();
    EXPECT_NEAR(evaluate(r.total.coefficient({0, 1}), p), -p[0], 1e-12);
  }
}

TEST(Commutator, NoConnectionReducesToD) {
  Expr x = Expr::symbol(0, "x");
  Expr y = Expr::symbol(1, "y");
  CommutatorReport r = connection_commutator(DifferentialForm::one_form({-y, x}), Chart(kXY));
  EXPECT_TRUE(same_form(r.total, DifferentialForm::monomial(2, {0, 1}, Expr(2))));
  EXPECT_NEAR(r.sup_norm_estimate, 2.0, 1e-12);
}

TEST(Hodge, EuclideanPlane) {
  Chart c = euclid(2);
  DifferentialForm dx = DifferentialForm::monomial(2, {0});
  DifferentialForm dy = DifferentialForm::monomial(2, {1});
  EXPECT_TRUE(same_form(hodge_star(dx, c), dy));
  EXPECT_TRUE(same_form(hodge_star(dy, c), Expr(-1) * dx));
  EXPECT_TRUE(same_form(hodge_star(DifferentialForm::scalar(2, Expr(1)), c), DifferentialForm::monomial(2, {0, 1})));
}

TEST(Hodge, VolumeFormCarriesSqrtDet) {
  Chart c = polar();
  Expr r = Expr::symbol(0, "r");
  DifferentialForm vol = hodge_star(DifferentialForm::scalar(2, Expr(1)), c);
  EXPECT_TRUE(same_form(vol, DifferentialForm::monomial(2, {0, 1}, r), c.sampling(ZeroTest{})));
}

TEST(Hodge, InvolutionSignLorentzian) {
  std::vector<Expr> d{Expr(1), Expr(-1), Expr(-1), Expr(-1)};
  Chart c({"t", "x", "y", "z"}, diag(d), std::nullopt);
  EXPECT_EQ(c.determinant_sign(), -1);
  RandomInputs gen(23);
  for (int p = 0; p <= 4; ++p) {
    DifferentialForm t = gen.polynomial_form(4, p, 2);
    int sign = -((p * (4 - p)) % 2 == 0 ? 1 : -1);
    DifferentialForm ss = hodge_star(hodge_star(t, c), c);
    EXPECT_TRUE(same_form(ss, Expr(sign) * t)) << "p = " << p;
  }
}

TEST(Hodge, RequiresMetric) { EXPECT_THROW(hodge_star(DifferentialForm::monomial(2, {0}), Chart(kXY)), Error); }

TEST(Codifferential, Examples) {
  Chart c = euclid(2);
  Expr x = Expr::symbol(0, "x");
  DifferentialForm r = codifferential(DifferentialForm::monomial(2, {0}, x), c);
  ASSERT_EQ(r.degree(), 0);
  EXPECT_TRUE(is_identically_zero(r.coefficient({}) + Expr(1)));
  EXPECT_TRUE(codifferential(DifferentialForm::one_form({Expr(3), Expr(-2)}), c).is_zero());
  EXPECT_TRUE(codifferential(DifferentialForm::scalar(2, x), c).is_zero());
}

TEST(Codifferential, MatchesNegativeDivergence) {
  Chart c = euclid(3);
  RandomInputs gen(31);
  for (int i = 0; i < 10; ++i) {
    DifferentialForm a = gen.polynomial_form(3, 1, 3);
    Expr div = Expr::add({differentiate(a.coefficient({0}), 0), differentiate(a.coefficient({1}), 1),
                          differentiate(a.coefficient({2}), 2)});
    DifferentialForm d = codifferential(a, c);
    EXPECT_TRUE(is_identically_zero(d.coefficient({}) + div));
  }
}

TEST(Laplace, Examples) {
  Chart c = euclid(2);
  Expr x = Expr::symbol(0, "x");
  Expr y = Expr::symbol(1, "y");
  DifferentialForm l = laplace_derham(DifferentialForm::scalar(2, x * x + y * y), c);
  EXPECT_TRUE(is_identically_zero(l.coefficient({}) + Expr(4)));
  EXPECT_TRUE(is_zero_form(laplace_derham(DifferentialForm::scalar(2, x * y), c), ZeroTest{}));
}

TEST(Laplace, PlaneWaveOnMinkowski) {
  std::vector<Expr> d{Expr(1), Expr(-1), Expr(-1), Expr(-1)};
  Chart c({"t", "x", "y", "z"}, diag(d), std::nullopt);
  Expr t = Expr::symbol(0, "t");
  Expr z = Expr::symbol(3, "z");
  DifferentialForm l = laplace_derham(DifferentialForm::scalar(4, sin(z - t)), c);
  EXPECT_LT(sampled_sup_norm(l.coefficients()), 1e-9);
}

TEST(Riemann, FlatCharts) {
  EXPECT_TRUE(all_identically_zero(riemann_curvature(euclid(2)).data()));
  Chart c = polar();
  EXPECT_TRUE(all_identically_zero(riemann_curvature(c).data(), c.sampling(ZeroTest{})));
}

TEST(Riemann, SphereHasCurvature) {
  Expr th = Expr::symbol(0, "th");
  Chart c({"th", "ph"}, diag({Expr(1), sin(th) * sin(th)}), std::nullopt, SampleBox{{0.3, 2.8}, {-3.0, 3.0}});
  Curvature R = riemann_curvature(c);
  // R^th_{ph th ph} = sin^2 th.
  EXPECT_TRUE(is_identically_zero(R(0, 1, 0, 1) - sin(th) * sin(th), c.sampling(ZeroTest{})));
}

TEST(Bianchi, Examples) {
  EXPECT_TRUE(bianchi_check(euclid(3)).ok());
  Expr x = Expr::symbol(0, "x");
  Chart warped(kXY, diag({Expr(1), Expr(1) + x * x / Expr(10)}), std::nullopt);
  BianchiReport r = bianchi_check(warped, ZeroTest{}.with_tol(1e-7));
  EXPECT_TRUE(r.ok());
  EXPECT_LT(r.first_residual, 1e-7);
  EXPECT_LT(r.second_residual, 1e-7);
}

TEST(Bianchi, AsymmetricConnectionFlagged) {
  Expr x = Expr::symbol(0, "x");
  Connection g(3);
  g(0, 1, 2) = x;
  Chart c(default_coordinates(3), std::nullopt, g);
  BianchiReport r = bianchi_check(c);
  EXPECT_FALSE(r.first_ok);
  EXPECT_GT(r.first_residual, 1e-3);
}

TEST(Chart, RejectsSingularMetric) {
  Expr x = Expr::symbol(0, "x");
  ExprMatrix g(2);
  g(0, 0) = Expr(1);
  g(0, 1) = Expr(1);
  g(1, 0) = Expr(1);
  g(1, 1) = Expr(1);
  EXPECT_THROW(Chart(kXY, g, std::nullopt), Error);
}

TEST(Chart, Signature) {
  std::vector<Expr> d{Expr(1), Expr(-1), Expr(-1), Expr(-1)};
  Chart c({"t", "x", "y", "z"}, diag(d), std::nullopt);
  std::vector<int> sig = c.signature();
  EXPECT_EQ(std::count(sig.begin(), sig.end(), 1), 1);
  EXPECT_EQ(std::count(sig.begin(), sig.end(), -1), 3);
}
