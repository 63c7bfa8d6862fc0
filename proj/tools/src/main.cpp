#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "evoform/cli/commands.hpp"

int main(int argc, char** argv) {
  using evoform::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"evoform: exterior forms, closure and evolutionary relations"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  app.add_option("--form", cfg.form, "form document");
  app.add_option("--form2", cfg.form2, "second form document");
  app.add_option("--chart", cfg.chart, "chart document");
  app.add_option("--relation", cfg.relation, "relation document");
  app.add_option("--pseudo", cfg.pseudo, "pseudostructure document (repeat for cascade)");
  app.add_option("--functional", cfg.functional, "degeneracy functional document");
  app.add_option("--tol", cfg.tol, "zero-test tolerance")->capture_default_str();
  app.add_option("--trials", cfg.trials, "zero-test sample points")->capture_default_str();
  auto* seed = app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--grid", cfg.grid, "grid nodes per axis")->capture_default_str();
  app.add_option("--out", cfg.out, "write the report here instead of stdout");

  const char* help[][2] = {
      {"derive", "exterior derivative of --form"},
      {"wedge", "wedge product of --form and --form2"},
      {"hodge", "Hodge dual of --form on --chart"},
      {"commutator", "commutator split of the 1-form --form on --chart"},
      {"classify", "exact / closed_inexact / closed_on_pseudostructure / unclosed"},
      {"potential", "homotopy potential of a closed --form"},
      {"evolve", "build --relation and measure its nonidentity"},
      {"loci", "degeneracy loci of --functional on --chart"},
      {"extract", "identical relation of --relation on --pseudo"},
      {"cascade", "integration cascade of --relation along --pseudo ..."},
      {"selftest", "run every invariant suite"},
  };
  for (const auto& h : help) app.add_subcommand(h[0], h[1]);
  auto* example = app.add_subcommand("example", "run a corpus example");
  example->add_option("name", cfg.example, "hamiltonian, maxwell, eikonal or entropy_gas")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (seed->count() == 0) {
    if (const char* env = std::getenv("EVOFORM_SEED")) {
      try {
        cfg.seed = std::stoull(env);
      } catch (const std::exception&) {
        std::cerr << "error: EVOFORM_SEED is not an unsigned integer\n";
        return 1;
      }
    }
  }
  return evoform::cli::execute(cfg, std::cout, std::cerr);
}
