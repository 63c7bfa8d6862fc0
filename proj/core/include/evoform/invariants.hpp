#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evoform/sampling.hpp"

namespace evoform {

struct SuiteResult {
  std::string module;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest residual seen, in the suite's own measure
  std::string detail;  // first failure
  bool passed() const noexcept { return cases > 0 && failures == 0; }
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  ZeroTest zt;
  int grid = 64;
};

using SuiteFn = SuiteResult (*)(const SuiteConfig&);

struct SuiteEntry {
  std::string_view module;
  std::string_view name;
  SuiteFn run;
};

/// Every module's property suite, in a fixed order.
const std::vector<SuiteEntry>& invariant_suites();
/// Throws Error for an unknown name.
SuiteResult run_suite(std::string_view name, const SuiteConfig& cfg);

SuiteResult suite_derivative_vs_difference(const SuiteConfig& cfg);
SuiteResult suite_simplify_identity(const SuiteConfig& cfg);
SuiteResult suite_parse_print_roundtrip(const SuiteConfig& cfg);

SuiteResult suite_dd_zero(const SuiteConfig& cfg);
SuiteResult suite_graded_leibniz(const SuiteConfig& cfg);
SuiteResult suite_anticommutativity(const SuiteConfig& cfg);
SuiteResult suite_pullback_naturality(const SuiteConfig& cfg);
SuiteResult suite_interior_product(const SuiteConfig& cfg);

SuiteResult suite_levi_civita_commutator(const SuiteConfig& cfg);
SuiteResult suite_torsion_linearity(const SuiteConfig& cfg);
SuiteResult suite_torsion_activation(const SuiteConfig& cfg);
SuiteResult suite_hodge_laws(const SuiteConfig& cfg);
SuiteResult suite_bianchi(const SuiteConfig& cfg);

SuiteResult suite_poincare_roundtrip(const SuiteConfig& cfg);
SuiteResult suite_restriction_naturality(const SuiteConfig& cfg);
SuiteResult suite_dual_form_pair(const SuiteConfig& cfg);

SuiteResult suite_gradient_identical(const SuiteConfig& cfg);
SuiteResult suite_perturbation_linearity(const SuiteConfig& cfg);
SuiteResult suite_identical_extraction(const SuiteConfig& cfg);
SuiteResult suite_degeneracy_loci(const SuiteConfig& cfg);
SuiteResult suite_classify_arithmetic(const SuiteConfig& cfg);
SuiteResult suite_example_corpus(const SuiteConfig& cfg);

}  // namespace evoform
