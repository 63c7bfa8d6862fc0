#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "evoform/closure.hpp"
#include "evoform/form.hpp"
#include "evoform/geometry.hpp"
#include "evoform/sampling.hpp"

namespace evoform {

/// Input of the evolutionary relation d(psi) = omega^p.
///
/// For p = 1 the right side is either `actions` (A_mu, giving A_mu dxi^mu)
/// or `omega`; for p >= 2 it must be `omega`. For p = 0 `psi` is absent and
/// `omega` is a scalar whose constancy is checked.
struct MaterialSystemSpec {
  Chart chart;
  std::optional<DifferentialForm> psi;
  std::optional<std::vector<Expr>> actions;
  std::optional<DifferentialForm> omega;
  int degree = 1;
};

struct EvolutionaryRelation {
  Chart chart;
  int degree = 1;
  std::optional<DifferentialForm> psi;
  DifferentialForm lhs;  // d psi
  DifferentialForm rhs;  // omega^p
  /// p = 1: split commutator (torsion part zero without a connection).
  std::optional<CommutatorReport> commutator;
  /// Components that must vanish for an identical relation: the commutator
  /// total for p = 1, d omega otherwise.
  DifferentialForm differential;
  bool identical = false;
};

/// Throws DimensionError on inconsistent degrees or charts.
EvolutionaryRelation build_relation(const MaterialSystemSpec& spec, const ZeroTest& zt = {});

/// max over `points` of max |commutator coefficient|.
double nonidentity_norm(const EvolutionaryRelation& rel, const std::vector<std::vector<double>>& points);
/// Same over 64 estimate points of the chart box (corners, center, random).
double nonidentity_norm(const EvolutionaryRelation& rel, std::uint64_t seed = 42);

struct RawFunctional {
  Expr expr;
};
/// det(d map_i / d xi^j) for a map from the chart to itself.
struct JacobianFunctional {
  std::vector<Expr> map;
};
struct DeterminantFunctional {
  ExprMatrix matrix;
};
/// {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i) over (q, p) index pairs.
struct PoissonFunctional {
  Expr f;
  Expr g;
  std::vector<std::pair<int, int>> pairs;
};
using DegeneracyFunctional = std::variant<RawFunctional, JacobianFunctional, DeterminantFunctional, PoissonFunctional>;

/// Scalar expression whose zero set is the degeneracy locus.
Expr functional_expr(const DegeneracyFunctional& f, int dim);
Expr poisson_bracket(const Expr& f, const Expr& g, std::span<const std::pair<int, int>> pairs);

/// Grid scan with `grid` nodes per axis over the chart box. Sign changes
/// along grid edges are refined by bisection (at most 60 halvings, stop
/// once |f| < tol); exact zeros at nodes are kept as they are. Points are
/// clustered into components with link distance sqrt(n) * spacing. Each
/// component becomes an unparametrized pseudostructure with constraint f.
/// Throws DomainError when f is undefined at a grid node.
std::vector<Pseudostructure> find_degeneracy_loci(const DegeneracyFunctional& f, const Chart& c, int grid = 64,
                                                  double tol = 1e-12);

struct IdenticalRelation {
  Pseudostructure pseudostructure;
  DifferentialForm restricted;  // omega_pi
  DifferentialForm potential;   // d_pi(potential) = omega_pi
  double closure_residual = 0.0;
  double residual = 0.0;  // sup |d_pi(potential) - omega_pi|
};

/// Restricts `form` to `ps`, checks restricted closure (AnalysisError when it
/// fails) and recovers a potential on the parameter chart.
IdenticalRelation extract_identical_form(const DifferentialForm& form, const Pseudostructure& ps,
                                         const ZeroTest& zt = {});
IdenticalRelation extract_identical_relation(const EvolutionaryRelation& rel, const Pseudostructure& ps,
                                             const ZeroTest& zt = {});

struct CascadeReport {
  std::vector<IdenticalRelation> stages;
  std::vector<int> k_values;  // closed-form degrees reached, last is the final potential degree
  bool complete = false;      // every stage in the chain succeeded
  std::string message;
};

/// Stage j restricts the current form to ps_chain[j] (whose ambient chart is
/// the previous stage's parameter chart) and continues with its potential.
/// Stops at the first failing stage; the failure is recorded in `message`.
CascadeReport integration_cascade(const EvolutionaryRelation& rel, const std::vector<Pseudostructure>& ps_chain,
                                  const ZeroTest& zt = {});

struct StructureClass {
  int p = 0;
  int k = 0;
  int n = 0;
  int pseudostructure_dim = 0;
  std::string label;
};

/// Throws DimensionError unless 0 <= k <= p <= 3 and k <= n.
StructureClass classify_structure(int p, int k, int n);

/// Re-evaluates the relation after each application of `update` to the
/// action coefficients; returns the nonidentity norm before the first step
/// and after each step. Only for p = 1 specs with actions.
using ActionUpdate = std::function<std::vector<Expr>(const std::vector<Expr>& actions, int step)>;
std::vector<double> selfvariation(const MaterialSystemSpec& spec, const ActionUpdate& update, int steps,
                                  const ZeroTest& zt = {});

using ReportValue = std::variant<bool, std::int64_t, double, std::string>;

struct ExampleReport {
  std::string name;
  bool passed = false;
  std::map<std::string, ReportValue> values;
};

/// hamiltonian, maxwell, eikonal or entropy_gas. Throws Error for other names.
ExampleReport run_example(std::string_view name, const ZeroTest& zt = {}, int grid = 64);
std::vector<std::string> example_names();

/// Two-sided Hausdorff distance between a point cloud and the circle of
/// radius r about the origin (circle sampled at 4096 points).
double hausdorff_to_circle(const std::vector<std::vector<double>>& points, double r);

}  // namespace evoform
