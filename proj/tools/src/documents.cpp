#include "evoform/cli/documents.hpp"

#include <algorithm>
#include <fstream>

namespace evoform::cli {

namespace {

std::string child(const std::string& at, const std::string& key) { return at + "/" + key; }
std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

const json& field(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(at, key), "missing field");
  return *it;
}

const json* optional_field(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

int as_int(const json& j, const std::string& at) {
  if (!j.is_number_integer()) throw SchemaError(at, "expected an integer");
  return j.get<int>();
}

const json& as_array(const json& j, const std::string& at) {
  if (!j.is_array()) throw SchemaError(at, "expected an array");
  return j;
}

std::vector<std::string> as_names(const json& j, const std::string& at) {
  std::vector<std::string> out;
  const json& arr = as_array(j, at);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string() || arr[i].get<std::string>().empty()) throw SchemaError(child(at, i), "expected a name");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

// Expressions may be given as strings or plain numbers.
Expr as_expr(const json& j, const std::vector<std::string>& coords, const std::string& at) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number_integer()) {
    return Expr(j.get<std::int64_t>());
  } else if (j.is_number()) {
    return Expr(Number::recognize(j.get<double>()));
  } else {
    throw SchemaError(at, "expected an expression string");
  }
  try {
    return parse_expr(text, coords);
  } catch (const Error& e) {
    throw SchemaError(at, e.what());
  }
}

std::vector<Expr> as_exprs(const json& j, const std::vector<std::string>& coords, const std::string& at) {
  std::vector<Expr> out;
  const json& arr = as_array(j, at);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_expr(arr[i], coords, child(at, i)));
  return out;
}

SampleBox as_box(const json& j, std::size_t dim, const std::string& at) {
  const json& arr = as_array(j, at);
  if (arr.size() != dim) throw SchemaError(at, "expected " + std::to_string(dim) + " intervals");
  SampleBox box;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = child(at, i);
    if (!arr[i].is_array() || arr[i].size() != 2 || !arr[i][0].is_number() || !arr[i][1].is_number()) {
      throw SchemaError(p, "expected [lo, hi]");
    }
    Interval iv{arr[i][0].get<double>(), arr[i][1].get<double>()};
    if (!(iv.lo < iv.hi)) throw SchemaError(p, "interval must have lo < hi");
    box.push_back(iv);
  }
  return box;
}

json box_to_json(const SampleBox& box) {
  json out = json::array();
  for (const Interval& iv : box) out.push_back({iv.lo, iv.hi});
  return out;
}

}  // namespace

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<std::string> form_coords(const json& j, const std::vector<std::string>* coords) {
  int dim = as_int(field(j, "dim", ""), "/dim");
  if (dim < 0) throw SchemaError("/dim", "dimension must be nonnegative");
  if (const json* c = optional_field(j, "coords")) {
    auto names = as_names(*c, "/coords");
    if (static_cast<int>(names.size()) != dim) throw SchemaError("/coords", "expected one name per dimension");
    return names;
  }
  if (coords && static_cast<int>(coords->size()) == dim) return *coords;
  return default_coordinates(dim);
}

DifferentialForm form_from_json(const json& j, const std::vector<std::string>* coords, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at, "expected a form object");
  int dim = as_int(field(j, "dim", at), child(at, "dim"));
  int degree = as_int(field(j, "degree", at), child(at, "degree"));
  if (dim < 0) throw SchemaError(child(at, "dim"), "dimension must be nonnegative");
  if (degree < 0 || degree > dim) throw SchemaError(child(at, "degree"), "degree must lie in 0..dim");
  std::vector<std::string> names;
  try {
    names = form_coords(j, coords);
  } catch (const SchemaError& e) {
    throw SchemaError(at + e.pointer(), e.what());
  }

  DifferentialForm out(dim, degree);
  std::string terms_at = child(at, "terms");
  const json& terms = as_array(field(j, "terms", at), terms_at);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    std::string term_at = child(terms_at, t);
    std::string idx_at = child(term_at, "indices");
    const json& idx = as_array(field(terms[t], "indices", term_at), idx_at);
    IndexTuple tuple;
    for (std::size_t k = 0; k < idx.size(); ++k) tuple.push_back(as_int(idx[k], child(idx_at, k)));
    if (static_cast<int>(tuple.size()) != degree) throw SchemaError(idx_at, "expected " + std::to_string(degree) + " indices");
    for (std::size_t k = 0; k < tuple.size(); ++k) {
      if (tuple[k] < 0 || tuple[k] >= dim) throw SchemaError(idx_at, "index out of range");
      if (k > 0 && tuple[k - 1] >= tuple[k]) throw SchemaError(idx_at, "indices must be strictly increasing");
    }
    if (!out.coefficient(tuple).is_zero()) throw SchemaError(idx_at, "duplicate index tuple");
    out.add_term(tuple, as_expr(field(terms[t], "coeff", term_at), names, child(term_at, "coeff")));
  }
  return out;
}

json form_to_json(const DifferentialForm& f, const std::vector<std::string>& coords) {
  json terms = json::array();
  for (const auto& [idx, c] : f.terms()) terms.push_back({{"indices", idx}, {"coeff", to_string(c)}});
  return {{"dim", f.dim()}, {"degree", f.degree()}, {"coords", coords}, {"terms", terms}};
}

Chart chart_from_json(const json& j, const ZeroTest& checks, const std::string& at) {
  int dim = as_int(field(j, "dim", at), child(at, "dim"));
  auto coords = as_names(field(j, "coords", at), child(at, "coords"));
  if (static_cast<int>(coords.size()) != dim) throw SchemaError(child(at, "coords"), "expected one name per dimension");
  auto n = static_cast<std::size_t>(dim);

  SampleBox box;
  if (const json* b = optional_field(j, "sample_box")) box = as_box(*b, n, child(at, "sample_box"));

  std::optional<ExprMatrix> metric;
  if (const json* m = optional_field(j, "metric")) {
    std::string m_at = child(at, "metric");
    if (!m->is_array() || m->size() != n) throw SchemaError(m_at, "expected an n x n matrix");
    metric.emplace(dim);
    for (std::size_t r = 0; r < n; ++r) {
      std::string row_at = child(m_at, r);
      if (!(*m)[r].is_array() || (*m)[r].size() != n) throw SchemaError(row_at, "expected a row of n entries");
      for (std::size_t c = 0; c < n; ++c) (*metric)(r, c) = as_expr((*m)[r][c], coords, child(row_at, c));
    }
  }
  std::optional<Connection> connection;
  if (const json* g = optional_field(j, "connection")) {
    std::string g_at = child(at, "connection");
    if (!g->is_array() || g->size() != n) throw SchemaError(g_at, "expected an n x n x n array");
    connection.emplace(dim);
    for (std::size_t s = 0; s < n; ++s) {
      std::string s_at = child(g_at, s);
      if (!(*g)[s].is_array() || (*g)[s].size() != n) throw SchemaError(s_at, "expected n rows");
      for (std::size_t b = 0; b < n; ++b) {
        std::string b_at = child(s_at, b);
        if (!(*g)[s][b].is_array() || (*g)[s][b].size() != n) throw SchemaError(b_at, "expected n entries");
        for (std::size_t a = 0; a < n; ++a) (*connection)(s, b, a) = as_expr((*g)[s][b][a], coords, child(b_at, a));
      }
    }
  }
  Chart chart(coords, std::move(metric), std::move(connection), box, checks);
  if (const json* s = optional_field(j, "star_shaped")) {
    if (!s->is_boolean()) throw SchemaError(child(at, "star_shaped"), "expected a boolean");
    chart.set_star_shaped(s->get<bool>());
  }
  return chart;
}

json chart_to_json(const Chart& c) {
  json out = {{"dim", c.dim()}, {"coords", c.coords()}, {"sample_box", box_to_json(c.box())}};
  out["metric"] = nullptr;
  out["connection"] = nullptr;
  int n = c.dim();
  if (c.has_metric()) {
    json rows = json::array();
    for (int r = 0; r < n; ++r) {
      json row = json::array();
      for (int col = 0; col < n; ++col) row.push_back(to_string(c.metric()(r, col)));
      rows.push_back(row);
    }
    out["metric"] = rows;
  }
  if (c.has_connection() && c.connection_given()) {
    json arr = json::array();
    for (int s = 0; s < n; ++s) {
      json plane = json::array();
      for (int b = 0; b < n; ++b) {
        json row = json::array();
        for (int a = 0; a < n; ++a) row.push_back(to_string(c.connection()(s, b, a)));
        plane.push_back(row);
      }
      arr.push_back(plane);
    }
    out["connection"] = arr;
  }
  if (!c.star_shaped()) out["star_shaped"] = false;
  return out;
}

Pseudostructure pseudo_from_json(const json& j, const std::vector<std::string>& ambient, const SampleBox& box,
                                 const ZeroTest& checks, const std::string& at) {
  auto constraints = as_exprs(field(j, "constraints", at), ambient, child(at, "constraints"));
  std::optional<Parametrization> par;
  if (const json* p = optional_field(j, "parametrization")) {
    std::string p_at = child(at, "parametrization");
    auto params = as_names(field(*p, "params", p_at), child(p_at, "params"));
    auto map = as_exprs(field(*p, "map", p_at), params, child(p_at, "map"));
    if (map.size() != ambient.size()) throw SchemaError(child(p_at, "map"), "expected one entry per ambient coordinate");
    SampleBox pbox;
    if (const json* b = optional_field(*p, "box")) pbox = as_box(*b, params.size(), child(p_at, "box"));
    par = Parametrization{params, map, pbox};
  }
  try {
    return Pseudostructure(ambient, box, constraints, par, checks);
  } catch (const DimensionError& e) {
    throw SchemaError(at, e.what());
  }
}

json pseudo_to_json(const Pseudostructure& ps) {
  json constraints = json::array();
  for (const Expr& c : ps.constraints()) constraints.push_back(to_string(c));
  json out = {{"constraints", constraints}};
  out["parametrization"] = nullptr;
  if (const auto& par = ps.parametrization()) {
    json map = json::array();
    for (const Expr& m : par->map) map.push_back(to_string(m));
    out["parametrization"] = {{"params", par->params}, {"map", map}, {"box", box_to_json(resized_box(par->box, par->params.size()))}};
  }
  return out;
}

MaterialSystemSpec relation_from_json(const json& j, const ZeroTest& checks) {
  Chart chart = chart_from_json(field(j, "chart", ""), checks, "/chart");
  int degree = as_int(field(j, "degree", ""), "/degree");
  if (degree < 0 || degree > 3) throw SchemaError("/degree", "degree must lie in 0..3");
  MaterialSystemSpec spec{chart, std::nullopt, std::nullopt, std::nullopt, degree};
  if (const json* psi = optional_field(j, "psi")) spec.psi = form_from_json(*psi, &chart.coords(), "/psi");
  const json& omega = field(j, "omega", "");
  if (omega.is_object() && omega.contains("A")) {
    spec.actions = as_exprs(omega["A"], chart.coords(), "/omega/A");
  } else {
    spec.omega = form_from_json(omega, &chart.coords(), "/omega");
  }
  return spec;
}

json relation_to_json(const MaterialSystemSpec& spec) {
  const auto& coords = spec.chart.coords();
  json out = {{"chart", chart_to_json(spec.chart)}, {"degree", spec.degree}};
  out["psi"] = spec.psi ? form_to_json(*spec.psi, coords) : json(nullptr);
  if (spec.actions) {
    json a = json::array();
    for (const Expr& e : *spec.actions) a.push_back(to_string(e));
    out["omega"] = {{"A", a}};
  } else if (spec.omega) {
    out["omega"] = form_to_json(*spec.omega, coords);
  }
  return out;
}

DegeneracyFunctional functional_from_json(const json& j, const std::vector<std::string>& coords) {
  const json& kind_j = field(j, "kind", "");
  if (!kind_j.is_string()) throw SchemaError("/kind", "expected a string");
  std::string kind = kind_j.get<std::string>();
  if (kind == "raw") return RawFunctional{as_expr(field(j, "expr", ""), coords, "/expr")};
  if (kind == "jacobian_det") {
    auto map = as_exprs(field(j, "map", ""), coords, "/map");
    if (map.size() != coords.size()) throw SchemaError("/map", "expected one component per coordinate");
    return JacobianFunctional{map};
  }
  if (kind == "determinant") {
    const json& m = as_array(field(j, "matrix", ""), "/matrix");
    int n = static_cast<int>(m.size());
    ExprMatrix matrix(n);
    for (int r = 0; r < n; ++r) {
      auto row = as_exprs(m[static_cast<std::size_t>(r)], coords, "/matrix/" + std::to_string(r));
      if (static_cast<int>(row.size()) != n) throw SchemaError("/matrix/" + std::to_string(r), "matrix must be square");
      for (int c = 0; c < n; ++c) matrix(r, c) = row[static_cast<std::size_t>(c)];
    }
    return DeterminantFunctional{matrix};
  }
  if (kind == "poisson_bracket") {
    PoissonFunctional pb{as_expr(field(j, "f", ""), coords, "/f"), as_expr(field(j, "g", ""), coords, "/g"), {}};
    const json& pairs = as_array(field(j, "pairs", ""), "/pairs");
    auto index_of = [&](const json& v, const std::string& at) {
      if (v.is_string()) {
        auto it = std::find(coords.begin(), coords.end(), v.get<std::string>());
        if (it == coords.end()) throw SchemaError(at, "unknown coordinate");
        return static_cast<int>(it - coords.begin());
      }
      int i = as_int(v, at);
      if (i < 0 || i >= static_cast<int>(coords.size())) throw SchemaError(at, "index out of range");
      return i;
    };
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::string at = "/pairs/" + std::to_string(i);
      if (!pairs[i].is_array() || pairs[i].size() != 2) throw SchemaError(at, "expected [q, p]");
      pb.pairs.emplace_back(index_of(pairs[i][0], at + "/0"), index_of(pairs[i][1], at + "/1"));
    }
    return pb;
  }
  throw SchemaError("/kind", "unknown functional kind '" + kind + "'");
}

}  // namespace evoform::cli
