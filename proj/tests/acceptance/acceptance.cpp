// One line per acceptance criterion; exit status 1 if any fails.
// Usage: evoform_acceptance <path to the evoform executable>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "evoform/closure.hpp"
#include "evoform/evolution.hpp"
#include "evoform/invariants.hpp"

using namespace evoform;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr double kZeroTol = 1e-9;
constexpr double kQuadratureTol = 1e-6;
constexpr double kBianchiTol = 1e-7;
constexpr double kTorsionPointTol = 1e-12;
constexpr double kIdenticalTol = 1e-9;
constexpr double kActionTol = 1e-5;
constexpr double kLocusTol = 1e-12;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
  void note(const std::string& what) { require(true, what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SuiteConfig config() {
  SuiteConfig cfg;
  cfg.seed = kSeed;
  cfg.zt.tol = kZeroTol;
  cfg.zt.trials = 32;
  cfg.zt.seed = kSeed;
  return cfg;
}

// Runs suites, requires them all to pass with at least `min_cases` each, and
// checks the combined wall time.
void suites(Verdict& v, const std::vector<std::pair<std::string, std::size_t>>& names, double time_limit) {
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, min_cases] : names) {
    SuiteResult r = run_suite(name, config());
    v.require(r.passed() && r.cases >= min_cases,
              name + " " + std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases) + " worst " +
                  fmt("%.2e", r.worst) + (r.detail.empty() ? "" : " [" + r.detail + "]"));
  }
  if (time_limit > 0) {
    double t = seconds_since(t0);
    v.require(t < time_limit, fmt("%.2fs", t) + fmt(" < %.0fs", time_limit));
  }
}

Verdict criterion_identical_extraction() {
  Verdict v;
  suites(v, {{"identical_extraction", 1}}, 0);
  std::vector<std::string> plane{"xi1", "xi2"};
  Expr x1 = Expr::symbol(0, "xi1");
  Expr x2 = Expr::symbol(1, "xi2");
  Expr phi = Expr::symbol(0, "phi");
  Pseudostructure circle(plane, {}, {x1 * x1 + x2 * x2 - Expr(1)},
                         Parametrization{{"phi"}, {cos(phi), sin(phi)}, {}});
  EvolutionaryRelation rel =
      build_relation(MaterialSystemSpec{Chart(plane), std::nullopt, std::vector<Expr>{-x2, x1}, std::nullopt, 1});
  IdenticalRelation id = extract_identical_relation(rel, circle);
  double norm = nonidentity_norm(rel, kSeed);
  double form_err = form_sup_norm(id.restricted - DifferentialForm::one_form({Expr(1)}), ZeroTest{});
  v.require(id.residual < kIdenticalTol && form_err < kIdenticalTol,
            "omega_pi = dphi residual " + fmt("%.1e", std::max(id.residual, form_err)));
  v.require(std::abs(norm - 2.0) <= kIdenticalTol, "nonidentity_norm " + fmt("%.12f", norm));
  return v;
}

Verdict criterion_loci() {
  Verdict v;
  suites(v, {{"degeneracy_loci", 1}}, 0);
  std::vector<std::string> plane{"xi1", "xi2"};
  Expr x1 = Expr::symbol(0, "xi1");
  Expr x2 = Expr::symbol(1, "xi2");
  const int grid = 64;
  auto loci = find_degeneracy_loci(RawFunctional{x1 * x1 + x2 * x2 - Expr(1)}, Chart(plane), grid);
  double h = 4.0 / (grid - 1);
  double hd = loci.size() == 1 ? hausdorff_to_circle(loci[0].points(), 1.0) : INFINITY;
  v.require(loci.size() == 1 && hd < 2 * h, "circle components " + std::to_string(loci.size()) + " hausdorff " +
                                               fmt("%.4f", hd) + fmt(" < %.4f", 2 * h));
  std::vector<std::pair<int, int>> pairs{{0, 1}};
  Expr H = (x2 * x2 + x1 * x1) / Expr(2);
  auto pb = find_degeneracy_loci(PoissonFunctional{H, x1, pairs}, Chart(plane), grid);
  // One root per vertical grid line, with q exactly on the line and p = 0
  // to the bisection tolerance.
  bool on_lines = pb.size() == 1 && pb[0].points().size() == static_cast<std::size_t>(grid);
  double worst_p = 0.0;
  if (on_lines) {
    for (const auto& p : pb[0].points()) {
      double k = std::round((p[0] + 2.0) * (grid - 1) / 4.0);
      double node = k + 1 == grid ? 2.0 : -2.0 + k * 4.0 / (grid - 1);
      on_lines = on_lines && p[0] == node;
      worst_p = std::max(worst_p, std::abs(p[1]));
    }
  }
  v.require(on_lines && worst_p <= kLocusTol, "poisson p = 0 on " + std::to_string(pb.empty() ? 0 : pb[0].points().size()) +
                                                  " grid lines, max |p| " + fmt("%.1e", worst_p));
  return v;
}

Verdict criterion_corpus() {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  for (const std::string& name : example_names()) {
    ExampleReport r = run_example(name, ZeroTest{}, 64);
    std::string what = name + (r.passed ? " pass" : " FAIL");
    if (name == "hamiltonian") {
      double d = std::get<double>(r.values.at("delta"));
      v.require(r.passed && std::abs(d) < kActionTol, what + fmt(" |delta| %.2e", std::abs(d)));
    } else if (name == "maxwell") {
      v.require(r.passed && std::get<bool>(r.values.at("closed")) && std::get<bool>(r.values.at("dual_closed")),
                what + " dF = 0, d*F = 0");
    } else if (name == "eikonal") {
      double hd = std::get<double>(r.values.at("hausdorff"));
      double h = std::get<double>(r.values.at("grid_spacing"));
      v.require(r.passed && hd < 2 * h, what + fmt(" error %.4f", hd) + fmt(" < 2h %.4f", 2 * h));
    } else if (name == "entropy_gas") {
      v.require(r.passed && std::get<bool>(r.values.at("identical")), what + " identical");
    } else {
      v.require(r.passed, what);
    }
  }
  double t = seconds_since(t0);
  v.require(t < 60.0, fmt("%.2fs < 60s", t));
  return v;
}

std::string capture(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  *status = pclose(p);
  return out;
}

Verdict criterion_determinism(const std::string& exe) {
  Verdict v;
  if (exe.empty()) {
    v.require(false, "no executable given");
    return v;
  }
  std::string cmd = "\"" + exe + "\" selftest --seed " + std::to_string(kSeed);
  int s1 = 0, s2 = 0;
  std::string a = capture(cmd, &s1);
  std::string b = capture(cmd, &s2);
  v.require(s1 == 0 && s2 == 0, "exit statuses " + std::to_string(s1) + ", " + std::to_string(s2));
  v.require(!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical " + (a == b ? "yes" : "no"));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::string exe = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> run;
  };
  std::vector<Criterion> criteria{
      {1, "d(d theta) = 0", [] { Verdict v; suites(v, {{"dd_zero", 300}}, 30.0); return v; }},
      {2, "graded Leibniz, anticommutativity",
       [] { Verdict v; suites(v, {{"graded_leibniz", 200}, {"anticommutativity", 200}}, 30.0); return v; }},
      {3, "commutator reduction, Levi-Civita",
       [] { Verdict v; suites(v, {{"levi_civita_commutator", 50}}, 20.0); return v; }},
      {4, "torsion activation",
       [] {
         Verdict v;
         suites(v, {{"torsion_activation", 20}}, 0);
         v.note(fmt("pointwise tol %.0e", kTorsionPointTol));
         return v;
       }},
      {5, "Poincare roundtrip",
       [] {
         Verdict v;
         suites(v, {{"poincare_roundtrip", 100}}, 0);
         v.note(fmt("quadrature tol %.0e", kQuadratureTol));
         return v;
       }},
      {6, "Hodge and codifferential laws", [] { Verdict v; suites(v, {{"hodge_laws", 1}}, 0); return v; }},
      {7, "Bianchi identities",
       [] {
         Verdict v;
         suites(v, {{"bianchi", 5}}, 0);
         v.note(fmt("tol %.0e", kBianchiTol));
         return v;
       }},
      {8, "identical relation extraction", criterion_identical_extraction},
      {9, "degeneracy loci", criterion_loci},
      {10, "example corpus", criterion_corpus},
      {11, "selftest determinism", [exe] { return criterion_determinism(exe); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("error: ") + e.what();
    }
    if (!v.ok) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", c.id, v.ok ? "PASS" : "FAIL", c.title, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
