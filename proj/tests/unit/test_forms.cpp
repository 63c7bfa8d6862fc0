#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "evoform/error.hpp"
#include "evoform/form.hpp"
#include "evoform/random.hpp"
#include "evoform/sampling.hpp"

using namespace evoform;

namespace {

const Expr x = Expr::symbol(0, "x");
const Expr y = Expr::symbol(1, "y");

DifferentialForm dx(int n = 2) { return DifferentialForm::monomial(n, {0}); }
DifferentialForm dy(int n = 2) { return DifferentialForm::monomial(n, {1}); }

bool same_form(const DifferentialForm& a, const DifferentialForm& b) { return is_zero_form(a - b, ZeroTest{}); }

}  // namespace

TEST(Form, CanonicalOrderAndSign) {
  IndexTuple idx{2, 0, 1};
  EXPECT_EQ(sort_with_sign(idx), 1);
  EXPECT_EQ(idx, (IndexTuple{0, 1, 2}));
  IndexTuple swap{1, 0};
  EXPECT_EQ(sort_with_sign(swap), -1);
  IndexTuple repeat{1, 1};
  EXPECT_EQ(sort_with_sign(repeat), 0);
}

TEST(Form, RejectsBadShape) {
  EXPECT_THROW(DifferentialForm(2, -1), DimensionError);
  EXPECT_THROW(DifferentialForm(-1, 0), DimensionError);
  EXPECT_THROW(DifferentialForm::monomial(2, {0, 2}), DimensionError);
}

TEST(Form, LinearArithmetic) {
  DifferentialForm a = DifferentialForm::one_form({Expr(1), Expr(0)});
  EXPECT_EQ(a.terms().size(), 1u);
  EXPECT_TRUE(same_form(a, dx()));
  DifferentialForm theta = DifferentialForm::one_form({x * y, sin(x)});
  EXPECT_TRUE((theta + Expr(-1) * theta).is_zero());
  DifferentialForm xdy = x * dy();
  EXPECT_TRUE(same_form(Expr(2) * xdy + Expr(3) * xdy, Expr(5) * xdy));
}

TEST(Wedge, Examples) {
  EXPECT_TRUE(wedge(dx(), dx()).is_zero());
  EXPECT_TRUE(same_form(wedge(dx(), dy()), Expr(-1) * wedge(dy(), dx())));
  DifferentialForm lhs = wedge(x * dy(), y * dx());
  DifferentialForm expected = DifferentialForm::monomial(2, {0, 1}, -(x * y));
  EXPECT_TRUE(same_form(lhs, expected));
  // Cross-check on the basis bivector (e_x, e_y): (a^b)(e_x,e_y) = a_x b_y - a_y b_x.
  ZeroTest zt;
  PointSampler sampler(zt.box, 2, 7);
  for (int i = 0; i < 5; ++i) {
    auto p = sampler.next();
    double direct = 0.0 * p[1] - p[0] * p[1];
    EXPECT_NEAR(evaluate(lhs.coefficient({0, 1}), p), direct, 1e-12);
  }
}

TEST(Wedge, DegreeOverflowIsEmpty) {
  DifferentialForm vol = wedge(dx(), dy());
  DifferentialForm r = wedge(vol, dx());
  EXPECT_TRUE(r.is_zero());
}

TEST(ExteriorDerivative, Examples) {
  DifferentialForm f = DifferentialForm::scalar(2, x * x * y);
  DifferentialForm expected = DifferentialForm::one_form({Expr(2) * x * y, x * x});
  EXPECT_TRUE(same_form(exterior_derivative(f), expected));

  DifferentialForm rot = DifferentialForm::one_form({-y, x});
  EXPECT_TRUE(same_form(exterior_derivative(rot), DifferentialForm::monomial(2, {0, 1}, Expr(2))));
}

TEST(ExteriorDerivative, TopDegreeVanishes) {
  DifferentialForm vol = DifferentialForm::monomial(2, {0, 1}, x * y);
  DifferentialForm d = exterior_derivative(vol);
  EXPECT_TRUE(d.is_zero());
  EXPECT_EQ(d.degree(), 3);
}

TEST(ExteriorDerivative, SquareIsZeroOnRandomForms) {
  RandomInputs gen(11);
  for (int i = 0; i < 40; ++i) {
    int n = gen.uniform_int(2, 4);
    DifferentialForm t = gen.polynomial_form(n, gen.uniform_int(0, n - 1), 3);
    EXPECT_TRUE(is_zero_form(exterior_derivative(exterior_derivative(t)), ZeroTest{}));
  }
}

TEST(InteriorProduct, Examples) {
  VectorField ex = VectorField::coordinate(2, 0);
  EXPECT_TRUE(same_form(interior_product(ex, wedge(dx(), dy())), dy()));
  EXPECT_TRUE(interior_product(ex, dy()).is_zero());
  EXPECT_THROW(interior_product(ex, DifferentialForm::scalar(2, x)), DimensionError);
}

TEST(InteriorProduct, SquareIsZero) {
  RandomInputs gen(5);
  for (int i = 0; i < 30; ++i) {
    int n = gen.uniform_int(2, 4);
    VectorField v = gen.vector_field(n, 2);
    DifferentialForm t = gen.polynomial_form(n, gen.uniform_int(2, n), 2);
    EXPECT_TRUE(is_zero_form(interior_product(v, interior_product(v, t)), ZeroTest{}));
  }
}

TEST(Pullback, RotationFormOnCircleIsDphi) {
  Expr phi = Expr::symbol(0, "phi");
  CoordinateMap circle{1, {cos(phi), sin(phi)}};
  DifferentialForm rot = DifferentialForm::one_form({-y, x});
  DifferentialForm pulled = pullback(circle, rot);
  ASSERT_EQ(pulled.dim(), 1);
  ASSERT_EQ(pulled.degree(), 1);
  for (int k = 0; k < 8; ++k) {
    std::vector<double> p{-3.0 + 0.8 * k};
    EXPECT_NEAR(evaluate(pulled.coefficient({0}), p), 1.0, 1e-12);
  }
}

TEST(Pullback, DegreeAboveSourceIsZero) {
  Expr t = Expr::symbol(0, "t");
  CoordinateMap line{1, {t * t, Expr(3) * t}};
  DifferentialForm r = pullback(line, wedge(dx(), dy()));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(r.dim(), 1);
}

TEST(Pullback, CommutesWithD) {
  RandomInputs gen(3);
  for (int i = 0; i < 20; ++i) {
    int m = gen.uniform_int(1, 3);
    int n = gen.uniform_int(2, 4);
    CoordinateMap f{m, {}};
    for (int k = 0; k < n; ++k) f.components.push_back(gen.polynomial(m, 2, 3));
    DifferentialForm theta = gen.polynomial_form(n, gen.uniform_int(0, n - 1), 2);
    EXPECT_TRUE(
        is_zero_form(pullback(f, exterior_derivative(theta)) - exterior_derivative(pullback(f, theta)), ZeroTest{}));
  }
}

TEST(Form, DefaultCoordinates) {
  EXPECT_EQ(default_coordinates(2), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(default_coordinates(3), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(default_coordinates(4).front(), "x0");
}
