#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evoform/cli/documents.hpp"

namespace evoform::cli {

struct RunConfig {
  std::string subcommand;
  std::string example;  // `example <name>`
  std::optional<std::string> form;
  std::optional<std::string> form2;
  std::optional<std::string> chart;
  std::optional<std::string> relation;
  std::vector<std::string> pseudo;  // repeatable for cascade
  std::optional<std::string> functional;
  double tol = 1e-9;
  std::size_t trials = 32;
  std::uint64_t seed = 42;
  int grid = 64;
  std::optional<std::string> out;

  ZeroTest zero_test() const;
};

struct CommandOutput {
  json report;
  int exit_code = 0;
};

/// Runs one subcommand. Throws evoform::Error (AnalysisError for analysis
/// failures) on bad input.
CommandOutput run_command(const RunConfig& cfg);

/// Runs and writes the report; maps AnalysisError to exit 2 and every other
/// error to exit 1, with a message on `err`.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// The selftest report: one entry per invariant suite, no timings.
json selftest_report(std::uint64_t seed, const ZeroTest& zt, int grid);

}  // namespace evoform::cli
