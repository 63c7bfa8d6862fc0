#include "evoform/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "evoform/error.hpp"

namespace evoform {

namespace {

Expr det_recursive(const ExprMatrix& m, std::span<const int> rows, std::vector<int>& cols) {
  if (rows.empty()) return Expr(1);
  if (rows.size() == 1) return m(rows[0], cols[0]);
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const Expr& entry = m(rows[0], cols[j]);
    if (entry.is_zero()) continue;
    std::vector<int> rest = cols;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    Expr sub = det_recursive(m, rows.subspan(1), rest);
    if (sub.is_zero()) continue;
    Expr term = entry * sub;
    terms.push_back(j % 2 == 0 ? term : -term);
  }
  return Expr::add(std::move(terms));
}

// All strictly increasing tuples of length k over 0..n-1.
std::vector<IndexTuple> combinations(int n, int k) {
  std::vector<IndexTuple> out;
  IndexTuple cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

IndexTuple complement(const IndexTuple& idx, int n) {
  IndexTuple out;
  for (int i = 0; i < n; ++i) {
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(i);
  }
  return out;
}

// Evaluates the metric numerically; throws DomainError off-domain.
Eigen::MatrixXd metric_at(const ExprMatrix& g, std::span<const double> p) {
  int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = evaluate(g(i, j), p);
  }
  return m;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  std::vector<int> rows(static_cast<std::size_t>(m.dim()));
  for (int i = 0; i < m.dim(); ++i) rows[static_cast<std::size_t>(i)] = i;
  std::vector<int> cols = rows;
  return det_recursive(m, rows, cols);
}

Expr minor_determinant(const ExprMatrix& m, std::span<const int> rows, std::span<const int> cols) {
  std::vector<int> c(cols.begin(), cols.end());
  return det_recursive(m, rows, c);
}

Chart::Chart(std::vector<std::string> coords, SampleBox box)
    : coords_(std::move(coords)), box_(resized_box(box, coords_.size())) {}

Chart::Chart(std::vector<std::string> coords, std::optional<ExprMatrix> metric,
             std::optional<Connection> connection, SampleBox box, const ZeroTest& checks)
    : Chart(std::move(coords), std::move(box)) {
  int n = dim();
  ZeroTest zt = sampling(checks);
  if (metric) {
    if (metric->dim() != n) throw DimensionError("metric size differs from chart dimension");
    std::vector<Expr> asym;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) asym.push_back((*metric)(i, j) - (*metric)(j, i));
    }
    if (!all_identically_zero(asym, zt)) throw StructureError("metric is not symmetric");

    Expr det = determinant(*metric);
    ZeroTest nondeg = zt;
    nondeg.trials = 16;
    auto sampled = sample_values(std::span<const Expr>(&det, 1), static_cast<std::size_t>(n), nondeg);
    for (const auto& row : sampled.values) {
      if (std::abs(row[0]) <= 1e-9) throw StructureError("metric is degenerate at a sample point");
    }

    // Signature at the box center, nudged off singular points.
    std::vector<double> ref = box_center(box_, static_cast<std::size_t>(n));
    bool found = false;
    for (int attempt = 0; attempt < 16 && !found; ++attempt) {
      std::vector<double> p = ref;
      for (int i = 0; i < n; ++i) {
        double frac = std::fmod(0.6180339887498949 * (attempt * (i + 1)), 1.0) - 0.5;
        p[static_cast<std::size_t>(i)] += attempt == 0 ? 0.0 : 0.25 * frac * box_interval(box_, static_cast<std::size_t>(i)).width();
      }
      try {
        Eigen::MatrixXd gm = metric_at(*metric, p);
        if (std::abs(gm.determinant()) <= 1e-9) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm);
        signature_.clear();
        det_sign_ = 1;
        for (int i = 0; i < n; ++i) {
          int s = es.eigenvalues()(i) < 0.0 ? -1 : 1;
          signature_.push_back(s);
          det_sign_ *= s;
        }
        found = true;
      } catch (const DomainError&) {
      }
    }
    if (!found) throw StructureError("metric is singular near the reference point");

    ExprMatrix inverse(n);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    Expr inv_det = Expr::pow(det, -1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // inverse(i, j) = cofactor(j, i) / det
        std::vector<int> rows, cols;
        for (int k : all) {
          if (k != j) rows.push_back(k);
          if (k != i) cols.push_back(k);
        }
        Expr cof = minor_determinant(*metric, rows, cols);
        if ((i + j) % 2 == 1) cof = -cof;
        inverse(i, j) = cof * inv_det;
      }
    }
    metric_ = std::move(metric);
    inverse_ = std::move(inverse);
    det_ = std::move(det);
  }
  if (connection) {
    if (connection->dim() != n) throw DimensionError("connection size differs from chart dimension");
    connection_ = std::move(connection);
    connection_given_ = true;
  } else if (metric_) {
    connection_ = christoffel_from_metric(*this);
  }
}

const ExprMatrix& Chart::metric() const {
  if (!metric_) throw StructureError("chart has no metric");
  return *metric_;
}

const ExprMatrix& Chart::inverse_metric() const {
  if (!inverse_) throw StructureError("chart has no metric");
  return *inverse_;
}

const Expr& Chart::metric_determinant() const {
  if (!det_) throw StructureError("chart has no metric");
  return *det_;
}

const Connection& Chart::connection() const {
  if (!connection_) throw StructureError("chart has no connection");
  return *connection_;
}

Connection christoffel_from_metric(const Chart& c) {
  const ExprMatrix& g = c.metric();
  const ExprMatrix& ginv = c.inverse_metric();
  int n = c.dim();
  // dg(k, i, j) = d_k g_{ij}
  ExprTensor<3> dg(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) dg(k, i, j) = differentiate(g(i, j), k);
    }
  }
  Connection gamma(n);
  Expr half(Number::rational(1, 2));
  for (int s = 0; s < n; ++s) {
    for (int b = 0; b < n; ++b) {
      for (int a = b; a < n; ++a) {
        std::vector<Expr> terms;
        for (int l = 0; l < n; ++l) {
          if (ginv(s, l).is_zero()) continue;
          Expr bracket = dg(b, l, a) + dg(a, l, b) - dg(l, b, a);
          if (bracket.is_zero()) continue;
          terms.push_back(ginv(s, l) * bracket);
        }
        Expr value = half * Expr::add(std::move(terms));
        gamma(s, b, a) = value;
        gamma(s, a, b) = value;
      }
    }
  }
  return gamma;
}

Connection torsion(const Chart& c) {
  const Connection& gamma = c.connection();
  int n = c.dim();
  Connection t(n);
  for (int s = 0; s < n; ++s) {
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) t(s, b, a) = gamma(s, b, a) - gamma(s, a, b);
    }
  }
  return t;
}

CommutatorReport connection_commutator(const DifferentialForm& a, const Chart& c, std::uint64_t seed) {
  if (a.degree() != 1) throw DimensionError("commutator needs a 1-form");
  if (a.dim() != c.dim()) throw DimensionError("form and chart dimensions differ");
  int n = c.dim();
  CommutatorReport r{exterior_derivative(a), DifferentialForm(n, 2), DifferentialForm(n, 2), 0.0};
  if (c.has_connection()) {
    Connection t = torsion(c);
    for (int alpha = 0; alpha < n; ++alpha) {
      for (int beta = alpha + 1; beta < n; ++beta) {
        std::vector<Expr> terms;
        for (int s = 0; s < n; ++s) {
          Expr as = a.coefficient({s});
          if (as.is_zero() || t(s, beta, alpha).is_zero()) continue;
          terms.push_back(t(s, beta, alpha) * as);
        }
        r.torsion_part.add_term({alpha, beta}, Expr::add(std::move(terms)));
      }
    }
  }
  r.total = r.derivative_part + r.torsion_part;
  auto points = estimate_points(c.box(), static_cast<std::size_t>(n), 64, seed);
  auto coeffs = r.total.coefficients();
  r.sup_norm_estimate = sup_norm_at(coeffs, points);
  return r;
}

DifferentialForm hodge_star(const DifferentialForm& t, const Chart& c) {
  int n = c.dim();
  int p = t.degree();
  if (t.dim() != n) throw DimensionError("form and chart dimensions differ");
  if (p > n) throw DimensionError("form degree exceeds chart dimension");
  const ExprMatrix& ginv = c.inverse_metric();
  Expr vol = sqrt(Expr(c.determinant_sign()) * c.metric_determinant());

  DifferentialForm out(n, n - p);
  for (const IndexTuple& k : combinations(n, p)) {
    // Raised component alpha^K = sum_I alpha_I det(g^{K,I}).
    std::vector<Expr> raised;
    for (const auto& [idx, coeff] : t.terms()) {
      Expr m = minor_determinant(ginv, k, idx);
      if (m.is_zero()) continue;
      raised.push_back(coeff * m);
    }
    Expr up = Expr::add(std::move(raised));
    if (up.is_zero()) continue;
    IndexTuple kc = complement(k, n);
    IndexTuple perm = k;
    perm.insert(perm.end(), kc.begin(), kc.end());
    int sign = sort_with_sign(perm);
    Expr coeff = vol * up;
    out.add_term(kc, sign > 0 ? coeff : -coeff);
  }
  return out;
}

DifferentialForm codifferential(const DifferentialForm& t, const Chart& c) {
  int n = c.dim();
  int p = t.degree();
  c.metric();
  if (p == 0) return DifferentialForm(n, 0);
  int exponent = n * (p + 1) + 1;
  int sign = c.determinant_sign() * (exponent % 2 == 0 ? 1 : -1);
  DifferentialForm r = hodge_star(exterior_derivative(hodge_star(t, c)), c);
  return sign > 0 ? r : Expr(-1) * r;
}

DifferentialForm laplace_derham(const DifferentialForm& t, const Chart& c) {
  int n = c.dim();
  int p = t.degree();
  c.metric();
  DifferentialForm out(n, p);
  if (p > 0) out = out + exterior_derivative(codifferential(t, c));
  if (p < n) out = out + codifferential(exterior_derivative(t), c);
  return out;
}

Curvature riemann_curvature(const Chart& c) {
  const Connection& g = c.connection();
  int n = c.dim();
  Curvature r(n);
  for (int rho = 0; rho < n; ++rho) {
    for (int sig = 0; sig < n; ++sig) {
      for (int mu = 0; mu < n; ++mu) {
        for (int nu = mu + 1; nu < n; ++nu) {
          std::vector<Expr> terms{differentiate(g(rho, nu, sig), mu), -differentiate(g(rho, mu, sig), nu)};
          for (int l = 0; l < n; ++l) {
            terms.push_back(g(rho, mu, l) * g(l, nu, sig));
            terms.push_back(-(g(rho, nu, l) * g(l, mu, sig)));
          }
          Expr value = Expr::add(std::move(terms));
          r(rho, sig, mu, nu) = value;
          r(rho, sig, nu, mu) = -value;
        }
      }
    }
  }
  return r;
}

BianchiReport bianchi_check(const Chart& c, const ZeroTest& zt) {
  Curvature r = riemann_curvature(c);
  const Connection& g = c.connection();
  int n = c.dim();
  ZeroTest local = c.sampling(zt);

  std::vector<Expr> first;
  std::vector<Expr> second;
  for (int rho = 0; rho < n; ++rho) {
    for (int s = 0; s < n; ++s) {
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
          if (s == m || m == k || s == k) continue;
          first.push_back(Expr::add({r(rho, s, m, k), r(rho, m, k, s), r(rho, k, s, m)}));
        }
      }
    }
  }

  // nabla_l R^rho_{s m k}
  auto nabla = [&](int l, int rho, int s, int m, int k) {
    std::vector<Expr> terms{differentiate(r(rho, s, m, k), l)};
    for (int q = 0; q < n; ++q) {
      terms.push_back(g(rho, l, q) * r(q, s, m, k));
      terms.push_back(-(g(q, l, s) * r(rho, q, m, k)));
      terms.push_back(-(g(q, l, m) * r(rho, s, q, k)));
      terms.push_back(-(g(q, l, k) * r(rho, s, m, q)));
    }
    return Expr::add(std::move(terms));
  };
  for (int l = 0; l < n; ++l) {
    for (int m = l + 1; m < n; ++m) {
      for (int k = m + 1; k < n; ++k) {
        for (int rho = 0; rho < n; ++rho) {
          for (int s = 0; s < n; ++s) {
            second.push_back(Expr::add({nabla(l, rho, s, m, k), nabla(m, rho, s, k, l), nabla(k, rho, s, l, m)}));
          }
        }
      }
    }
  }

  BianchiReport rep;
  rep.first_residual = first.empty() ? 0.0 : sampled_sup_norm(first, local);
  rep.second_residual = second.empty() ? 0.0 : sampled_sup_norm(second, local);
  rep.first_ok = rep.first_residual <= zt.tol;
  rep.second_ok = rep.second_residual <= zt.tol;
  return rep;
}

}  // namespace evoform
