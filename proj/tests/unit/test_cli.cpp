#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "evoform/cli/commands.hpp"
#include "evoform/cli/documents.hpp"

using namespace evoform;
using namespace evoform::cli;

namespace {

std::string data(const std::string& name) { return std::string(EVOFORM_TEST_DATA) + "/" + name; }

RunConfig config(std::string sub) {
  RunConfig c;
  c.subcommand = std::move(sub);
  return c;
}

int run(const RunConfig& c, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int code = execute(c, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(Documents, SchemaErrorPointsAtIndices) {
  try {
    form_from_json(read_json(data("bad_indices_form.json")));
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.pointer(), "/terms/0/indices");
  }
}

TEST(Documents, SchemaErrors) {
  EXPECT_THROW(form_from_json(json::parse(R"({"dim": 2, "degree": 1})")), SchemaError);
  EXPECT_THROW(form_from_json(json::parse(R"({"dim": 2, "degree": 1, "terms": [{"indices": [2], "coeff": "1"}]})")),
               SchemaError);
  EXPECT_THROW(
      form_from_json(json::parse(R"({"dim": 2, "degree": 1, "terms": [{"indices": [0], "coeff": 1}, {"indices": [0], "coeff": "x"}]})")),
      SchemaError);
  EXPECT_THROW(functional_from_json(json::parse(R"({"kind": "hessian"})"), {"x", "y"}), SchemaError);
}

TEST(Documents, FormSaveLoadSaveIsByteStable) {
  for (const char* name : {"rotation_form.json", "gradient_form.json"}) {
    json in = read_json(data(name));
    DifferentialForm f = form_from_json(in);
    std::vector<std::string> coords = form_coords(in, nullptr);
    std::string first = dump(form_to_json(f, coords));
    std::string second = dump(form_to_json(form_from_json(json::parse(first)), coords));
    EXPECT_EQ(first, second);
  }
}

TEST(Documents, ChartRoundTrip) {
  ZeroTest zt;
  for (const char* name : {"euclid2_chart.json", "torsion_chart.json"}) {
    Chart c = chart_from_json(read_json(data(name)), zt);
    std::string first = dump(chart_to_json(c));
    std::string second = dump(chart_to_json(chart_from_json(json::parse(first), zt)));
    EXPECT_EQ(first, second);
  }
}

TEST(Documents, RelationRoundTrip) {
  ZeroTest zt;
  MaterialSystemSpec spec = relation_from_json(read_json(data("rotation_relation.json")), zt);
  std::string first = dump(relation_to_json(spec));
  std::string second = dump(relation_to_json(relation_from_json(json::parse(first), zt)));
  EXPECT_EQ(first, second);
}

TEST(Documents, DumpSortsKeys) {
  EXPECT_EQ(dump(json::parse(R"({"b": 1, "a": [2]})")), "{\n  \"a\": [\n    2\n  ],\n  \"b\": 1\n}\n");
}

TEST(Commands, Derive) {
  RunConfig c = config("derive");
  c.form = data("rotation_form.json");
  CommandOutput r = run_command(c);
  EXPECT_EQ(r.exit_code, 0);
  const json& d = r.report.at("derivative");
  EXPECT_EQ(d.at("degree"), 2);
  ASSERT_EQ(d.at("terms").size(), 1u);
  EXPECT_EQ(d.at("terms")[0].at("coeff"), "2");
}

TEST(Commands, ExitCodes) {
  RunConfig bad = config("derive");
  bad.form = data("bad_indices_form.json");
  std::string err;
  EXPECT_EQ(run(bad, nullptr, &err), 1);
  EXPECT_NE(err.find("/terms/0/indices"), std::string::npos);

  RunConfig missing = config("derive");
  missing.form = data("does_not_exist.json");
  EXPECT_EQ(run(missing), 1);

  RunConfig not_closed = config("potential");
  not_closed.form = data("rotation_form.json");
  EXPECT_EQ(run(not_closed), 2);

  RunConfig ok = config("potential");
  ok.form = data("gradient_form.json");
  EXPECT_EQ(run(ok), 0);
}

TEST(Commands, Extract) {
  RunConfig c = config("extract");
  c.relation = data("rotation_relation.json");
  c.pseudo = {data("unit_circle_pseudo.json")};
  std::string out;
  ASSERT_EQ(run(c, &out), 0);
  json r = json::parse(out);
  EXPECT_EQ(r.at("potential").at("terms")[0].at("coeff"), "phi");
  EXPECT_NEAR(r.at("nonidentity_norm").get<double>(), 2.0, 1e-9);
  EXPECT_FALSE(r.at("identical").get<bool>());
}

TEST(Commands, ExtractOffLocusFails) {
  RunConfig c = config("extract");
  c.relation = data("rotation_relation.json");
  EXPECT_NE(run(c), 0);
}

TEST(Commands, Commutator) {
  RunConfig c = config("commutator");
  c.form = data("gradient_form.json");
  c.chart = data("torsion_chart.json");
  CommandOutput r = run_command(c);
  // Gradient: derivative part vanishes, only torsion survives: -x * (2xy).
  EXPECT_TRUE(r.report.at("derivative_part").at("terms").empty());
  EXPECT_EQ(r.report.at("torsion_part").at("terms").size(), 1u);
}

TEST(Commands, PoissonLoci) {
  RunConfig c = config("loci");
  c.functional = data("poisson_functional.json");
  c.chart = data("plane_chart.json");
  c.grid = 17;
  CommandOutput r = run_command(c);
  ASSERT_EQ(r.report.at("loci").size(), 1u);
  const json& pts = r.report.at("loci")[0].at("points");
  EXPECT_EQ(pts.size(), 17u);
  for (const json& p : pts) EXPECT_EQ(p[1].get<double>(), 0.0);
}

TEST(Commands, ExampleExitCode) {
  RunConfig c = config("example");
  c.example = "entropy_gas";
  std::string out;
  EXPECT_EQ(run(c, &out), 0);
  EXPECT_TRUE(json::parse(out).at("passed").get<bool>());
  c.example = "nonexistent";
  EXPECT_EQ(run(c), 1);
}

TEST(Commands, SelftestIsDeterministic) {
  ZeroTest zt;
  std::string a = dump(selftest_report(42, zt, 64));
  std::string b = dump(selftest_report(42, zt, 64));
  EXPECT_EQ(a, b);
  json r = json::parse(a);
  for (const json& s : r.at("suites")) EXPECT_TRUE(s.at("passed").get<bool>()) << s.at("name");
}
