#include <gtest/gtest.h>

#include <ostream>
#include <string>

#include "evoform/error.hpp"
#include "evoform/invariants.hpp"

using namespace evoform;

namespace evoform {
void PrintTo(const SuiteEntry& e, std::ostream* os) { *os << e.module << "/" << e.name; }
}  // namespace evoform

class InvariantSuite : public ::testing::TestWithParam<SuiteEntry> {};

TEST_P(InvariantSuite, Passes) {
  SuiteResult r = GetParam().run(SuiteConfig{});
  EXPECT_GT(r.cases, 0u);
  EXPECT_EQ(r.failures, 0u) << r.detail << " (worst " << r.worst << ")";
}

TEST(InvariantSuites, SeedChangesInputsNotVerdict) {
  SuiteConfig cfg;
  cfg.seed = 7;
  EXPECT_TRUE(run_suite("dd_zero", cfg).passed());
  EXPECT_TRUE(run_suite("graded_leibniz", cfg).passed());
  EXPECT_THROW(run_suite("no_such_suite", cfg), Error);
}

INSTANTIATE_TEST_SUITE_P(All, InvariantSuite, ::testing::ValuesIn(invariant_suites()),
                         [](const ::testing::TestParamInfo<SuiteEntry>& info) {
                           return std::string(info.param.name);
                         });
