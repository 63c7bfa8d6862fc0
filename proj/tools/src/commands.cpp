#include "evoform/cli/commands.hpp"

#include <ostream>

#include "evoform/invariants.hpp"

namespace evoform::cli {

ZeroTest RunConfig::zero_test() const {
  ZeroTest zt;
  zt.tol = tol;
  zt.trials = trials;
  zt.seed = seed;
  return zt;
}

namespace {

double sup(const DifferentialForm& f, const ZeroTest& zt) { return f.is_zero() ? 0.0 : form_sup_norm(f, zt); }

const std::string& need(const std::optional<std::string>& path, const char* flag) {
  if (!path) throw Error(std::string("missing ") + flag);
  return *path;
}

std::optional<Chart> load_chart(const RunConfig& cfg) {
  if (!cfg.chart) return std::nullopt;
  return chart_from_json(read_json(*cfg.chart), cfg.zero_test());
}

struct LoadedForm {
  DifferentialForm form;
  std::vector<std::string> coords;
};

LoadedForm load_form(const std::string& path, const std::optional<Chart>& chart) {
  json j = read_json(path);
  const std::vector<std::string>* coords = chart ? &chart->coords() : nullptr;
  DifferentialForm f = form_from_json(j, coords);
  if (chart && f.dim() != chart->dim()) throw SchemaError("/dim", "form and chart dimensions differ");
  return {f, form_coords(j, coords)};
}

Chart chart_or_plain(const std::optional<Chart>& chart, const std::vector<std::string>& coords) {
  return chart ? *chart : Chart(coords);
}

json commutator_terms(const EvolutionaryRelation& rel) {
  json terms = json::array();
  if (rel.commutator) {
    const CommutatorReport& c = *rel.commutator;
    for (const auto& [idx, total] : c.total.terms()) {
      terms.push_back({{"indices", idx},
                       {"total", to_string(total)},
                       {"derivative", to_string(c.derivative_part.coefficient(idx))},
                       {"torsion", to_string(c.torsion_part.coefficient(idx))}});
    }
  } else {
    for (const auto& [idx, total] : rel.differential.terms()) terms.push_back({{"indices", idx}, {"total", to_string(total)}});
  }
  return terms;
}

json identical_to_json(const IdenticalRelation& id) {
  const Parametrization& par = id.pseudostructure.require_parametrization();
  return {{"k", id.restricted.degree()},
          {"pseudostructure", pseudo_to_json(id.pseudostructure)},
          {"restricted", form_to_json(id.restricted, par.params)},
          {"potential", form_to_json(id.potential, par.params)},
          {"closure_residual", id.closure_residual},
          {"residual", id.residual}};
}

json example_to_json(const ExampleReport& r) {
  json out = {{"name", r.name}, {"passed", r.passed}};
  for (const auto& [key, value] : r.values) {
    std::visit([&](const auto& v) { out[key] = v; }, value);
  }
  return out;
}

// ---------------------------------------------------------------- subcommands

CommandOutput cmd_derive(const RunConfig& cfg) {
  auto chart = load_chart(cfg);
  auto f = load_form(need(cfg.form, "--form"), chart);
  return {{{"derivative", form_to_json(exterior_derivative(f.form), f.coords)}}};
}

CommandOutput cmd_wedge(const RunConfig& cfg) {
  auto chart = load_chart(cfg);
  auto a = load_form(need(cfg.form, "--form"), chart);
  auto b = load_form(need(cfg.form2, "--form2"), chart);
  return {{{"wedge", form_to_json(wedge(a.form, b.form), a.coords)}}};
}

CommandOutput cmd_hodge(const RunConfig& cfg) {
  auto chart = load_chart(cfg);
  if (!chart) throw Error("missing --chart");
  auto f = load_form(need(cfg.form, "--form"), chart);
  return {{{"hodge", form_to_json(hodge_star(f.form, *chart), f.coords)},
           {"signature", chart->signature()},
           {"determinant_sign", chart->determinant_sign()}}};
}

CommandOutput cmd_commutator(const RunConfig& cfg) {
  auto chart = load_chart(cfg);
  auto f = load_form(need(cfg.form, "--form"), chart);
  Chart c = chart_or_plain(chart, f.coords);
  CommutatorReport r = connection_commutator(f.form, c, cfg.seed);
  return {{{"derivative_part", form_to_json(r.derivative_part, f.coords)},
           {"torsion_part", form_to_json(r.torsion_part, f.coords)},
           {"total", form_to_json(r.total, f.coords)},
           {"sup_norm_estimate", r.sup_norm_estimate}}};
}

CommandOutput cmd_classify(const RunConfig& cfg) {
  auto chart = load_chart(cfg);
  auto f = load_form(need(cfg.form, "--form"), chart);
  Chart c = chart_or_plain(chart, f.coords);
  ZeroTest zt = c.sampling(cfg.zero_test());
  std::optional<Pseudostructure> ps;
  if (!cfg.pseudo.empty()) ps = pseudo_from_json(read_json(cfg.pseudo.front()), f.coords, c.box(), zt);
  ClosureReport r = classify_form(f.form, ps, zt, c.star_shaped());
  json out = {{"classification", closure_name(r.classification)},
              {"closure_residual", r.closure_residual},
              {"restricted_residual", r.restricted_residual},
              {"potential_residual", r.potential_residual}};
  if (r.potential) out["potential"] = form_to_json(*r.potential, f.coords);
  if (r.pseudostructure) out["pseudostructure"] = pseudo_to_json(*r.pseudostructure);
  if (r.witness_point) out["witness_point"] = *r.witness_point;
  if (r.witness_differential) out["witness_differential"] = form_to_json(*r.witness_differential, f.coords);
  return {out};
}

CommandOutput cmd_potential(const RunConfig& cfg) {
  auto chart = load_chart(cfg);
  auto f = load_form(need(cfg.form, "--form"), chart);
  Chart c = chart_or_plain(chart, f.coords);
  if (!c.star_shaped()) throw AnalysisError("chart is flagged as not star-shaped");
  ZeroTest zt = c.sampling(cfg.zero_test());
  auto potential = find_potential(f.form, zt);
  json out;
  out["potential"] = nullptr;
  out["residual"] = 0.0;
  if (potential) {
    out["potential"] = form_to_json(*potential, f.coords);
    out["residual"] = sup(exterior_derivative(*potential) - f.form, zt);
  }
  return {out};
}

MaterialSystemSpec load_relation(const RunConfig& cfg) {
  return relation_from_json(read_json(need(cfg.relation, "--relation")), cfg.zero_test());
}

CommandOutput cmd_evolve(const RunConfig& cfg) {
  MaterialSystemSpec spec = load_relation(cfg);
  EvolutionaryRelation rel = build_relation(spec, cfg.zero_test());
  const auto& coords = rel.chart.coords();
  json out = {{"degree", rel.degree},
              {"identical", rel.identical},
              {"nonidentity_norm", nonidentity_norm(rel, cfg.seed)},
              {"lhs", form_to_json(rel.lhs, coords)},
              {"rhs", form_to_json(rel.rhs, coords)},
              {"commutator_terms", commutator_terms(rel)}};
  return {out};
}

CommandOutput cmd_loci(const RunConfig& cfg) {
  std::optional<Chart> chart = load_chart(cfg);
  if (!chart && cfg.relation) chart = load_relation(cfg).chart;
  if (!chart) throw Error("missing --chart");
  DegeneracyFunctional fn = functional_from_json(read_json(need(cfg.functional, "--functional")), chart->coords());
  // Bisection stops well below the zero-test tolerance.
  auto loci = find_degeneracy_loci(fn, *chart, cfg.grid, cfg.tol * 1e-3);
  json arr = json::array();
  for (const Pseudostructure& ps : loci) {
    const Expr& constraint = ps.constraints().front();
    json residuals = json::array();
    for (const auto& p : ps.points()) residuals.push_back(std::abs(evaluate(constraint, p)));
    arr.push_back({{"constraint", to_string(constraint)}, {"points", ps.points()}, {"residuals", residuals}});
  }
  return {{{"loci", arr}, {"grid", cfg.grid}}};
}

CommandOutput cmd_extract(const RunConfig& cfg) {
  MaterialSystemSpec spec = load_relation(cfg);
  if (cfg.pseudo.size() != 1) throw Error("extract needs exactly one --pseudo");
  EvolutionaryRelation rel = build_relation(spec, cfg.zero_test());
  Pseudostructure ps = pseudo_from_json(read_json(cfg.pseudo.front()), rel.chart.coords(), rel.chart.box(), cfg.zero_test());
  IdenticalRelation id = extract_identical_relation(rel, ps, cfg.zero_test());
  json out = identical_to_json(id);
  out["identical"] = rel.identical;
  out["nonidentity_norm"] = nonidentity_norm(rel, cfg.seed);
  return {out};
}

CommandOutput cmd_cascade(const RunConfig& cfg) {
  MaterialSystemSpec spec = load_relation(cfg);
  EvolutionaryRelation rel = build_relation(spec, cfg.zero_test());
  std::vector<Pseudostructure> chain;
  std::vector<std::string> ambient = rel.chart.coords();
  SampleBox box = rel.chart.box();
  for (const std::string& path : cfg.pseudo) {
    chain.push_back(pseudo_from_json(read_json(path), ambient, box, cfg.zero_test()));
    if (const auto& par = chain.back().parametrization()) {
      ambient = par->params;
      box = resized_box(par->box, par->params.size());
    }
  }
  CascadeReport rep = integration_cascade(rel, chain, cfg.zero_test());
  json stages = json::array();
  for (const IdenticalRelation& st : rep.stages) stages.push_back(identical_to_json(st));
  json out = {{"cascade", stages}, {"k_values", rep.k_values}, {"complete", rep.complete}, {"message", rep.message}};
  return {out, chain.empty() || rep.complete ? 0 : 2};
}

CommandOutput cmd_example(const RunConfig& cfg) {
  if (cfg.example.empty()) throw Error("example needs a name");
  ExampleReport r = run_example(cfg.example, cfg.zero_test(), cfg.grid);
  return {example_to_json(r), r.passed ? 0 : 2};
}

CommandOutput cmd_selftest(const RunConfig& cfg) {
  json report = selftest_report(cfg.seed, cfg.zero_test(), cfg.grid);
  return {report, report["passed"].get<bool>() ? 0 : 2};
}

}  // namespace

json selftest_report(std::uint64_t seed, const ZeroTest& zt, int grid) {
  SuiteConfig cfg{seed, zt, grid};
  json suites = json::array();
  bool all = true;
  for (const SuiteEntry& entry : invariant_suites()) {
    SuiteResult r = entry.run(cfg);
    all = all && r.passed();
    json s = {{"module", r.module}, {"name", r.name}, {"cases", r.cases}, {"failures", r.failures},
              {"worst", r.worst}, {"passed", r.passed()}};
    if (!r.detail.empty()) s["detail"] = r.detail;
    suites.push_back(s);
  }
  return {{"seed", seed}, {"tol", zt.tol}, {"trials", zt.trials}, {"suites", suites}, {"passed", all}};
}

CommandOutput run_command(const RunConfig& cfg) {
  if (!(cfg.tol > 0)) throw Error("--tol must be positive");
  if (cfg.trials < 1) throw Error("--trials must be at least 1");
  if (cfg.grid < 2) throw Error("--grid must be at least 2");
  const std::string& s = cfg.subcommand;
  if (s == "derive") return cmd_derive(cfg);
  if (s == "wedge") return cmd_wedge(cfg);
  if (s == "hodge") return cmd_hodge(cfg);
  if (s == "commutator") return cmd_commutator(cfg);
  if (s == "classify") return cmd_classify(cfg);
  if (s == "potential") return cmd_potential(cfg);
  if (s == "evolve") return cmd_evolve(cfg);
  if (s == "loci") return cmd_loci(cfg);
  if (s == "extract") return cmd_extract(cfg);
  if (s == "cascade") return cmd_cascade(cfg);
  if (s == "example") return cmd_example(cfg);
  if (s == "selftest") return cmd_selftest(cfg);
  throw Error("unknown subcommand '" + s + "'");
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    CommandOutput result = run_command(cfg);
    std::string text = dump(result.report);
    if (cfg.out) {
      write_text(*cfg.out, text);
    } else {
      out << text;
    }
    return result.exit_code;
  } catch (const AnalysisError& e) {
    err << "analysis failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace evoform::cli
