#include "evoform/form.hpp"

#include <algorithm>

#include "evoform/error.hpp"

namespace evoform {

int sort_with_sign(IndexTuple& idx) {
  int sign = 1;
  // Insertion sort counting transpositions; tuples are short.
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return 0;
  return sign;
}

DifferentialForm::DifferentialForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0) throw DimensionError("negative chart dimension");
  if (degree < 0) throw DimensionError("negative form degree");
}

DifferentialForm DifferentialForm::scalar(int dim, Expr f) {
  DifferentialForm out(dim, 0);
  out.add_term({}, f);
  return out;
}

DifferentialForm DifferentialForm::one_form(std::vector<Expr> coeffs) {
  int n = static_cast<int>(coeffs.size());
  DifferentialForm out(n, 1);
  for (int i = 0; i < n; ++i) out.add_term({i}, coeffs[static_cast<std::size_t>(i)]);
  return out;
}

DifferentialForm DifferentialForm::monomial(int dim, IndexTuple idx, Expr coeff) {
  DifferentialForm out(dim, static_cast<int>(idx.size()));
  out.add_term(std::move(idx), coeff);
  return out;
}

Expr DifferentialForm::coefficient(IndexTuple idx) const {
  int sign = sort_with_sign(idx);
  if (sign == 0) return Expr();
  auto it = terms_.find(idx);
  if (it == terms_.end()) return Expr();
  return sign > 0 ? it->second : -it->second;
}

void DifferentialForm::add_term(IndexTuple idx, const Expr& coeff) {
  if (static_cast<int>(idx.size()) != degree_) throw DimensionError("index tuple length differs from form degree");
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw DimensionError("index out of range for chart dimension");
  }
  int sign = sort_with_sign(idx);
  if (sign == 0) return;
  Expr c = simplify(coeff);
  if (sign < 0) c = -c;
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::vector<Expr> DifferentialForm::coefficients() const {
  std::vector<Expr> out;
  out.reserve(terms_.size());
  for (const auto& [idx, c] : terms_) out.push_back(c);
  return out;
}

namespace {

void require_same_shape(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dim() != b.dim()) throw DimensionError("forms live on charts of different dimension");
  if (a.degree() != b.degree()) throw DimensionError("forms have different degrees");
}

}  // namespace

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_shape(a, b);
  DifferentialForm out = a;
  for (const auto& [idx, c] : b.terms()) out.add_term(idx, c);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_shape(a, b);
  DifferentialForm out = a;
  for (const auto& [idx, c] : b.terms()) out.add_term(idx, -c);
  return out;
}

DifferentialForm operator*(const Expr& f, const DifferentialForm& a) {
  return a.map_coefficients([&](const Expr& c) { return f * c; });
}

VectorField VectorField::coordinate(int dim, int i) {
  VectorField v;
  v.components.assign(static_cast<std::size_t>(dim), Expr());
  v.components[static_cast<std::size_t>(i)] = Expr(1);
  return v;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dim() != b.dim()) throw DimensionError("wedge of forms on charts of different dimension");
  int degree = a.degree() + b.degree();
  DifferentialForm out(a.dim(), degree);
  if (degree > a.dim()) return out;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add_term(std::move(idx), ca * cb);
    }
  }
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& t) {
  int n = t.dim();
  if (t.degree() >= n) return DifferentialForm(n, t.degree() + 1);
  DifferentialForm out(n, t.degree() + 1);
  for (const auto& [idx, c] : t.terms()) {
    for (int j = 0; j < n; ++j) {
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      Expr dc = differentiate(c, j);
      if (dc.is_zero()) continue;
      IndexTuple full{j};
      full.insert(full.end(), idx.begin(), idx.end());
      out.add_term(std::move(full), dc);
    }
  }
  return out;
}

DifferentialForm interior_product(const VectorField& v, const DifferentialForm& t) {
  if (t.degree() < 1) throw DimensionError("interior product of a 0-form");
  if (v.dim() != t.dim()) throw DimensionError("vector field and form on charts of different dimension");
  DifferentialForm out(t.dim(), t.degree() - 1);
  for (const auto& [idx, c] : t.terms()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Expr& vk = v.components[static_cast<std::size_t>(idx[k])];
      if (vk.is_zero()) continue;
      IndexTuple rest = idx;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      Expr term = vk * c;
      out.add_term(std::move(rest), k % 2 == 0 ? term : -term);
    }
  }
  return out;
}

DifferentialForm pullback(const CoordinateMap& map, const DifferentialForm& t) {
  if (map.target_dim() != t.dim()) throw DimensionError("map target dimension differs from form chart");
  int m = map.source_dim;
  DifferentialForm out(m, t.degree());
  if (t.degree() > m) return out;

  std::vector<DifferentialForm> differentials;
  differentials.reserve(map.components.size());
  for (const Expr& component : map.components) {
    if (component.max_symbol_index() >= m) throw DimensionError("map component uses symbols outside the source chart");
    differentials.push_back(exterior_derivative(DifferentialForm::scalar(m, component)));
  }
  for (const auto& [idx, c] : t.terms()) {
    DifferentialForm piece = DifferentialForm::scalar(m, substitute(c, map.components));
    for (int i : idx) {
      piece = wedge(piece, differentials[static_cast<std::size_t>(i)]);
      if (piece.is_zero()) break;
    }
    if (!piece.is_zero()) out = out + piece;
  }
  return out;
}

DifferentialForm linear_combine(std::span<const double> coeffs, std::span<const DifferentialForm> forms) {
  if (coeffs.size() != forms.size()) throw DimensionError("coefficient and form counts differ");
  if (forms.empty()) throw DimensionError("linear combination of no forms");
  DifferentialForm out(forms[0].dim(), forms[0].degree());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    require_same_shape(out, forms[i]);
    Expr w = Number::recognize(coeffs[i], 1000000, 0.0);
    if (w.is_zero()) continue;
    out = out + w * forms[i];
  }
  return out;
}

bool is_zero_form(const DifferentialForm& t, const ZeroTest& zt) {
  auto cs = t.coefficients();
  return all_identically_zero(cs, zt);
}

double form_sup_norm(const DifferentialForm& t, const ZeroTest& zt) {
  auto cs = t.coefficients();
  return sampled_sup_norm(cs, zt);
}

std::vector<std::string> default_coordinates(int dim) {
  static const char* kNames[] = {"x", "y", "z"};
  std::vector<std::string> out;
  for (int i = 0; i < dim; ++i) {
    out.push_back(dim <= 3 ? std::string(kNames[i]) : "x" + std::to_string(i));
  }
  return out;
}

std::vector<Expr> coordinate_symbols(std::span<const std::string> names) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.push_back(Expr::symbol(static_cast<int>(i), names[i]));
  return out;
}

std::string to_string(const DifferentialForm& t) {
  if (t.is_zero()) return "0";
  std::string s;
  for (const auto& [idx, c] : t.terms()) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(c) + ")";
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "^dx" : " dx") + std::to_string(idx[k]);
  }
  return s;
}

}  // namespace evoform
