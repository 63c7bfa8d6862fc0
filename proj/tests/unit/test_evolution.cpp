#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "evoform/closure.hpp"
#include "evoform/error.hpp"
#include "evoform/evolution.hpp"

using namespace evoform;

namespace {

const std::vector<std::string> kXi{"xi1", "xi2"};
const Expr xi1 = Expr::symbol(0, "xi1");
const Expr xi2 = Expr::symbol(1, "xi2");

MaterialSystemSpec actions_spec(std::vector<Expr> a) {
  return MaterialSystemSpec{Chart(kXi), std::nullopt, std::move(a), std::nullopt, 1};
}

Pseudostructure unit_circle() {
  Expr phi = Expr::symbol(0, "phi");
  return Pseudostructure(kXi, {}, {xi1 * xi1 + xi2 * xi2 - Expr(1)},
                         Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}});
}

}  // namespace

TEST(Relation, GradientActionsAreIdentical) {
  Expr psi = sin(xi1) * xi2 + xi2 * xi2;
  EvolutionaryRelation rel = build_relation(actions_spec({differentiate(psi, 0), differentiate(psi, 1)}));
  EXPECT_TRUE(rel.identical);
  EXPECT_LT(nonidentity_norm(rel), 1e-12);
}

TEST(Relation, RotationActionsAreNot) {
  EvolutionaryRelation rel = build_relation(actions_spec({-xi2, xi1}));
  EXPECT_FALSE(rel.identical);
  ASSERT_TRUE(rel.commutator.has_value());
  EXPECT_TRUE(is_zero_form(rel.differential - DifferentialForm::monomial(2, {0, 1}, Expr(2)), ZeroTest{}));
  EXPECT_NEAR(nonidentity_norm(rel), 2.0, 1e-12);
}

TEST(Relation, NormAgainstGridMaximum) {
  EvolutionaryRelation rel = build_relation(actions_spec({Expr(0), xi1 * xi2}));
  double brute = 0.0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      std::vector<double> p{-2.0 + 0.02 * i, -2.0 + 0.02 * j};
      brute = std::max(brute, std::abs(evaluate(rel.differential.coefficient({0, 1}), p)));
    }
  }
  EXPECT_NEAR(brute, 2.0, 1e-12);
  EXPECT_NEAR(nonidentity_norm(rel), brute, 0.05 * brute);
}

TEST(Relation, DegreeMismatchRejected) {
  MaterialSystemSpec spec{Chart(kXi), DifferentialForm::one_form({xi1, xi2}), std::nullopt,
                          DifferentialForm::one_form({xi1, xi2}), 1};
  EXPECT_THROW(build_relation(spec), DimensionError);
}

TEST(Loci, CircleFunctional) {
  auto loci = find_degeneracy_loci(RawFunctional{xi1 * xi1 + xi2 * xi2 - Expr(1)}, Chart(kXi), 64);
  ASSERT_EQ(loci.size(), 1u);
  double h = 4.0 / 63.0;
  EXPECT_LT(hausdorff_to_circle(loci[0].points(), 1.0), 2 * h);
}

TEST(Loci, JacobianOfFold) {
  auto loci = find_degeneracy_loci(JacobianFunctional{{xi1 * xi1, xi2}}, Chart(kXi), 33);
  ASSERT_EQ(loci.size(), 1u);
  for (const auto& p : loci[0].points()) EXPECT_NEAR(p[0], 0.0, 1e-12);
}

TEST(Loci, PoissonBracket) {
  std::vector<std::string> qp{"q", "p"};
  Expr q = Expr::symbol(0, "q");
  Expr p = Expr::symbol(1, "p");
  std::vector<std::pair<int, int>> pairs{{0, 1}};
  Expr H = (p * p + q * q) / Expr(2);
  EXPECT_TRUE(is_identically_zero(poisson_bracket(H, q, pairs) + p));
  auto loci = find_degeneracy_loci(PoissonFunctional{H, q, pairs}, Chart(qp), 65);
  ASSERT_EQ(loci.size(), 1u);
  for (const auto& pt : loci[0].points()) EXPECT_EQ(pt[1], 0.0);
}

TEST(Loci, NoSignChangeNoLocus) {
  EXPECT_TRUE(find_degeneracy_loci(RawFunctional{xi1 * xi1 + Expr(1)}, Chart(kXi), 32).empty());
}

TEST(Extract, RotationOnCircle) {
  EvolutionaryRelation rel = build_relation(actions_spec({-xi2, xi1}));
  IdenticalRelation id = extract_identical_relation(rel, unit_circle());
  EXPECT_LT(id.residual, 1e-9);
  EXPECT_TRUE(is_zero_form(id.restricted - DifferentialForm::one_form({Expr(1)}), ZeroTest{}));
  EXPECT_EQ(to_string(id.potential.coefficient({})), "phi");
  EXPECT_NEAR(nonidentity_norm(rel), 2.0, 1e-9);
}

TEST(Extract, UnclosedRestrictionFails) {
  std::vector<std::string> xyz{"x", "y", "z"};
  Expr u = Expr::symbol(0, "u");
  Expr v = Expr::symbol(1, "v");
  Pseudostructure plane(xyz, {}, {Expr::symbol(2, "z")}, Parametrization{{"u", "v"}, {u, v, Expr(0)}, {}});
  DifferentialForm t = DifferentialForm::one_form({Expr::symbol(1, "y"), Expr(0), Expr(0)});
  EXPECT_THROW(extract_identical_form(t, plane), AnalysisError);
}

TEST(Cascade, TwoFormDownToFunctions) {
  std::vector<std::string> xyz{"x", "y", "z"};
  Expr x = Expr::symbol(0, "x");
  Expr y = Expr::symbol(1, "y");
  Expr z = Expr::symbol(2, "z");
  // omega = z dx^dy is not closed; on z = 1 it is the area form of the plane.
  MaterialSystemSpec spec{Chart(xyz), std::nullopt, std::nullopt, DifferentialForm::monomial(3, {0, 1}, z), 2};
  EvolutionaryRelation rel = build_relation(spec);
  EXPECT_FALSE(rel.identical);
  Expr u = Expr::symbol(0, "u");
  Expr v = Expr::symbol(1, "v");
  Pseudostructure plane(xyz, {}, {z - Expr(1)}, Parametrization{{"u", "v"}, {u, v, Expr(1)}, {}});
  // The stage-1 potential is (u dv - v du)/2; on the circle u^2+v^2 = 1 it restricts to dphi/2.
  Expr phi = Expr::symbol(0, "phi");
  std::vector<std::string> uv{"u", "v"};
  Pseudostructure circle(uv, {}, {u * u + v * v - Expr(1)}, Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}});
  CascadeReport r = integration_cascade(rel, {plane, circle});
  EXPECT_TRUE(r.complete) << r.message;
  EXPECT_EQ(r.k_values, (std::vector<int>{2, 1, 0}));
  ASSERT_EQ(r.stages.size(), 2u);
  EXPECT_LT(r.stages.back().residual, 1e-9);
  (void)x;
  (void)y;
}

TEST(Cascade, ChainLongerThanDegree) {
  EvolutionaryRelation rel = build_relation(actions_spec({-xi2, xi1}));
  EXPECT_THROW(integration_cascade(rel, {unit_circle(), unit_circle()}), DimensionError);
}

TEST(StructureClass, Labels) {
  EXPECT_EQ(classify_structure(1, 0, 2).label, "Schrodinger");
  EXPECT_EQ(classify_structure(1, 1, 2).label, "Hamiltonian");
  StructureClass m = classify_structure(2, 2, 4);
  EXPECT_EQ(m.label, "Maxwell");
  EXPECT_EQ(m.pseudostructure_dim, 2);
  EXPECT_EQ(classify_structure(3, 3, 4).label, "gravitational");
  EXPECT_THROW(classify_structure(1, 2, 3), DimensionError);
  EXPECT_THROW(classify_structure(2, 2, 1), DimensionError);
}

TEST(Selfvariation, DampedRotationApproachesIdentity) {
  ActionUpdate halve = [](const std::vector<Expr>& a, int) {
    return std::vector<Expr>{a[0] / Expr(2), a[1] / Expr(2)};
  };
  std::vector<double> norms = selfvariation(actions_spec({-xi2, xi1}), halve, 3);
  ASSERT_EQ(norms.size(), 4u);
  EXPECT_NEAR(norms[0], 2.0, 1e-12);
  EXPECT_NEAR(norms[3], 0.25, 1e-12);
}

TEST(Examples, Corpus) {
  for (const std::string& name : example_names()) {
    ExampleReport r = run_example(name);
    EXPECT_TRUE(r.passed) << name;
  }
  EXPECT_THROW(run_example("nonexistent"), Error);
}

TEST(Examples, HamiltonianActionMatch) {
  ExampleReport r = run_example("hamiltonian");
  auto it = r.values.find("delta");
  ASSERT_NE(it, r.values.end());
  EXPECT_LT(std::abs(std::get<double>(it->second)), 1e-5);
}
