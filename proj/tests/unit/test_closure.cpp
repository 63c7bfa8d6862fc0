#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "evoform/closure.hpp"
#include "evoform/error.hpp"
#include "evoform/form.hpp"
#include "evoform/geometry.hpp"
#include "evoform/random.hpp"

using namespace evoform;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const Expr x = Expr::symbol(0, "x");
const Expr y = Expr::symbol(1, "y");

bool same_form(const DifferentialForm& a, const DifferentialForm& b, const ZeroTest& zt = {}) {
  return is_zero_form(a - b, zt);
}

Pseudostructure unit_circle() {
  Expr phi = Expr::symbol(0, "phi");
  return Pseudostructure(kXY, {}, {x * x + y * y - Expr(1)}, Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}});
}

ExprMatrix identity(int n) {
  ExprMatrix g(n);
  for (int i = 0; i < n; ++i) g(i, i) = Expr(1);
  return g;
}

}  // namespace

TEST(IsClosed, Examples) {
  DifferentialForm A = DifferentialForm::one_form({sin(x * y), x * x * y});
  EXPECT_TRUE(is_closed(exterior_derivative(A)));
  EXPECT_FALSE(is_closed(DifferentialForm::one_form({y, Expr(0)})));
  EXPECT_TRUE(is_closed(DifferentialForm::monomial(2, {0, 1}, exp(x) * y)));
}

TEST(Potential, GradientOfPolynomial) {
  DifferentialForm t = DifferentialForm::one_form({Expr(2) * x * y, x * x});
  auto p = find_potential(t);
  ASSERT_TRUE(p.has_value());
  ASSERT_EQ(p->degree(), 0);
  EXPECT_TRUE(same_form(exterior_derivative(*p), t));
  // Centered at the origin the homotopy potential is x^2 y exactly.
  EXPECT_TRUE(is_identically_zero(p->coefficient({}) - x * x * y));
}

TEST(Potential, AreaForm) {
  DifferentialForm vol = DifferentialForm::monomial(2, {0, 1});
  auto p = find_potential(vol);
  ASSERT_TRUE(p.has_value());
  DifferentialForm half = DifferentialForm::one_form({Expr::real(-0.5) * y, Expr::real(0.5) * x});
  EXPECT_TRUE(same_form(*p, half));
  EXPECT_TRUE(same_form(exterior_derivative(*p), vol));
}

TEST(Potential, NotClosedIsAnalysisError) {
  try {
    find_potential(DifferentialForm::one_form({y, Expr(0)}));
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_NE(std::string(e.what()).find("not closed"), std::string::npos);
  }
}

TEST(Potential, SmoothFormUsesQuadrature) {
  DifferentialForm t = exterior_derivative(DifferentialForm::scalar(2, sin(x) * exp(y) + x * y));
  bool quad = false;
  DifferentialForm h = homotopy_operator(t, homotopy_center({}, 2), ZeroTest{}, &quad);
  EXPECT_TRUE(quad);
  EXPECT_LT(form_sup_norm(exterior_derivative(h) - t, ZeroTest{}), 1e-6);
  auto p = find_potential(t);
  ASSERT_TRUE(p.has_value());
}

TEST(Potential, TwoFormIn3D) {
  RandomInputs gen(8);
  for (int i = 0; i < 10; ++i) {
    DifferentialForm t = exterior_derivative(gen.polynomial_form(3, 1, 3));
    if (t.is_zero()) continue;
    auto p = find_potential(t);
    ASSERT_TRUE(p.has_value());
    EXPECT_TRUE(same_form(exterior_derivative(*p), t));
  }
}

TEST(Restrict, RotationFormToCircle) {
  Pseudostructure c = unit_circle();
  DifferentialForm r = restrict_to_pseudostructure(DifferentialForm::one_form({-y, x}), c);
  EXPECT_TRUE(same_form(r, DifferentialForm::one_form({Expr(1)})));
  EXPECT_TRUE(exterior_derivative(r).is_zero());
}

TEST(Restrict, TwoFormToCurveVanishes) {
  DifferentialForm r = restrict_to_pseudostructure(DifferentialForm::monomial(2, {0, 1}, x), unit_circle());
  EXPECT_TRUE(r.is_zero());
}

TEST(Pseudostructure, RejectsInconsistentParametrization) {
  Expr phi = Expr::symbol(0, "phi");
  EXPECT_THROW(Pseudostructure(kXY, {}, {x * x + y * y - Expr(1)},
                               Parametrization{{"phi"}, {Expr(2) * cos(phi), sin(phi)}, {}}),
               StructureError);
  EXPECT_THROW(Pseudostructure(kXY, {}, {x}, Parametrization{{"s", "t"}, {Expr(0), phi}, {}}), Error);
}

TEST(Pseudostructure, RejectsDegenerateParametrization) {
  EXPECT_THROW(Pseudostructure(kXY, {}, {y}, Parametrization{{"s"}, {Expr(1), Expr(0)}, {}}), StructureError);
}

TEST(DualForm, CircleTangentForm) {
  Chart c(kXY, identity(2), std::nullopt);
  DualFormReport r = dual_form_check(unit_circle(), c, DifferentialForm::one_form({-y, x}));
  EXPECT_TRUE(r.closed);
  EXPECT_TRUE(r.dual_closed);
  EXPECT_LT(r.closure_residual, 1e-9);
  EXPECT_LT(r.dual_residual, 1e-9);
}

TEST(DualForm, ConstantFormOnLine) {
  Chart c(kXY, identity(2), std::nullopt);
  Expr t = Expr::symbol(0, "t");
  Pseudostructure line(kXY, {}, {y - Expr(2) * x}, Parametrization{{"t"}, {t, Expr(2) * t}, {}});
  EXPECT_TRUE(dual_form_check(line, c, DifferentialForm::one_form({Expr(3), Expr(-1)})).exact_conservation());
}

TEST(DualForm, NegativeControlOnPlane) {
  std::vector<std::string> xyz{"x", "y", "z"};
  Chart c(xyz, identity(3), std::nullopt);
  Expr u = Expr::symbol(0, "u");
  Expr v = Expr::symbol(1, "v");
  Expr z = Expr::symbol(2, "z");
  Pseudostructure plane(xyz, {}, {z}, Parametrization{{"u", "v"}, {u, v, Expr(0)}, {}});
  DualFormReport r = dual_form_check(plane, c, DifferentialForm::one_form({y, Expr(0), Expr(0)}));
  EXPECT_FALSE(r.closed);
  EXPECT_GT(r.closure_residual, 1e-3);
}

TEST(Classify, Examples) {
  ClosureReport exact = classify_form(exterior_derivative(DifferentialForm::scalar(2, x * x * y)), std::nullopt);
  EXPECT_EQ(exact.classification, Closure::Exact);
  ASSERT_TRUE(exact.potential.has_value());
  EXPECT_TRUE(is_identically_zero(exact.potential->coefficient({}) - x * x * y));

  DifferentialForm rot = DifferentialForm::one_form({-y, x});
  ClosureReport on_ps = classify_form(rot, unit_circle());
  EXPECT_EQ(on_ps.classification, Closure::ClosedOnPseudostructure);

  ClosureReport open = classify_form(rot, std::nullopt);
  EXPECT_EQ(open.classification, Closure::Unclosed);
  ASSERT_TRUE(open.witness_point.has_value());
  ASSERT_TRUE(open.witness_differential.has_value());
  EXPECT_TRUE(same_form(*open.witness_differential, DifferentialForm::monomial(2, {0, 1}, Expr(2))));
  EXPECT_NEAR(open.closure_residual, 2.0, 1e-12);
}

TEST(Classify, ClosedButNotStarShaped) {
  ClosureReport r = classify_form(exterior_derivative(DifferentialForm::scalar(2, x * y)), std::nullopt, ZeroTest{},
                                  false);
  EXPECT_EQ(r.classification, Closure::ClosedInexact);
  EXPECT_FALSE(r.potential.has_value());
}

TEST(Classify, Names) {
  EXPECT_EQ(closure_name(Closure::Exact), "exact");
  EXPECT_EQ(closure_name(Closure::ClosedInexact), "closed_inexact");
  EXPECT_EQ(closure_name(Closure::ClosedOnPseudostructure), "closed_on_pseudostructure");
  EXPECT_EQ(closure_name(Closure::Unclosed), "unclosed");
}
