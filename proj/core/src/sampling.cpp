#include "evoform/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "evoform/error.hpp"

namespace evoform {

Interval box_interval(const SampleBox& box, std::size_t axis) {
  return axis < box.size() ? box[axis] : Interval{};
}

SampleBox resized_box(const SampleBox& box, std::size_t dim) {
  SampleBox out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = box_interval(box, i);
  return out;
}

std::vector<double> box_center(const SampleBox& box, std::size_t dim) {
  std::vector<double> c(dim);
  for (std::size_t i = 0; i < dim; ++i) c[i] = box_interval(box, i).center();
  return c;
}

bool box_contains_origin(const SampleBox& box, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    Interval iv = box_interval(box, i);
    if (iv.lo > 0.0 || iv.hi < 0.0) return false;
  }
  return true;
}

PointSampler::PointSampler(SampleBox box, std::size_t dim, std::uint64_t seed)
    : box_(resized_box(box, dim)), dim_(dim), rng_(seed) {}

std::vector<double> PointSampler::next() {
  std::vector<double> p(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::uniform_real_distribution<double> u(box_[i].lo, box_[i].hi);
    p[i] = u(rng_);
  }
  return p;
}

std::size_t sampling_dim(std::span<const Expr> exprs, const SampleBox& box) {
  int max_index = -1;
  for (const Expr& e : exprs) max_index = std::max(max_index, e.max_symbol_index());
  return std::max(box.size(), static_cast<std::size_t>(max_index + 1));
}

SampledValues sample_values(std::span<const Expr> exprs, std::size_t dim, const ZeroTest& zt) {
  if (zt.trials == 0) throw DimensionError("zero test needs at least one trial");
  PointSampler sampler(zt.box, dim, zt.seed);
  SampledValues out;
  std::size_t max_draws = 10 * zt.trials;
  for (std::size_t draw = 0; draw < max_draws && out.points.size() < zt.trials; ++draw) {
    std::vector<double> p = sampler.next();
    std::vector<double> vals;
    vals.reserve(exprs.size());
    try {
      for (const Expr& e : exprs) {
        double v = evaluate(e, p);
        if (!std::isfinite(v)) throw DomainError("non-finite value");
        vals.push_back(v);
      }
    } catch (const DomainError&) {
      continue;
    }
    out.points.push_back(std::move(p));
    out.values.push_back(std::move(vals));
  }
  if (out.points.empty()) throw DomainError("all sample points rejected: domain too restrictive");
  return out;
}

bool all_identically_zero(std::span<const Expr> exprs, const ZeroTest& zt) {
  if (std::all_of(exprs.begin(), exprs.end(), [](const Expr& e) { return e.is_zero(); })) {
    if (zt.trials == 0) throw DimensionError("zero test needs at least one trial");
    return true;
  }
  return sampled_sup_norm(exprs, zt) <= zt.tol;
}

bool is_identically_zero(const Expr& e, const ZeroTest& zt) {
  return all_identically_zero(std::span<const Expr>(&e, 1), zt);
}

double sampled_sup_norm(std::span<const Expr> exprs, const ZeroTest& zt) {
  if (exprs.empty()) return 0.0;
  auto sampled = sample_values(exprs, sampling_dim(exprs, zt.box), zt);
  double worst = 0.0;
  for (const auto& row : sampled.values) {
    for (double v : row) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

std::vector<std::vector<double>> estimate_points(const SampleBox& box, std::size_t dim,
                                                 std::size_t count, std::uint64_t seed) {
  std::vector<std::vector<double>> pts;
  SampleBox b = resized_box(box, dim);
  if (dim < 63 && (std::size_t{1} << dim) <= count / 2) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = (mask >> i) & 1U ? b[i].hi : b[i].lo;
      pts.push_back(std::move(p));
    }
  }
  if (pts.size() < count) pts.push_back(box_center(b, dim));
  PointSampler sampler(b, dim, seed);
  while (pts.size() < count) pts.push_back(sampler.next());
  return pts;
}

double sup_norm_at(std::span<const Expr> exprs, const std::vector<std::vector<double>>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    try {
      double local = 0.0;
      for (const Expr& e : exprs) {
        double v = evaluate(e, p);
        if (!std::isfinite(v)) throw DomainError("non-finite value");
        local = std::max(local, std::abs(v));
      }
      worst = std::max(worst, local);
    } catch (const DomainError&) {
    }
  }
  return worst;
}

std::optional<Number> numeric_constant(const Expr& e, std::size_t dim, const ZeroTest& zt) {
  if (e.is_constant()) return e.number();
  auto sampled = sample_values(std::span<const Expr>(&e, 1), dim, zt);
  double ref = sampled.values.front().front();
  for (const auto& row : sampled.values) {
    if (std::abs(row.front() - ref) > zt.tol) return std::nullopt;
  }
  return Number::recognize(ref);
}

}  // namespace evoform
