#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "evoform/expr.hpp"

namespace evoform {

struct Interval {
  double lo = -2.0;
  double hi = 2.0;
  double center() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Axis-aligned sampling region, one interval per coordinate. Coordinates
/// past the end use the default interval [-2, 2].
using SampleBox = std::vector<Interval>;

Interval box_interval(const SampleBox& box, std::size_t axis);
SampleBox resized_box(const SampleBox& box, std::size_t dim);
std::vector<double> box_center(const SampleBox& box, std::size_t dim);
bool box_contains_origin(const SampleBox& box, std::size_t dim);

/// Parameters of the probabilistic identity test.
struct ZeroTest {
  std::size_t trials = 32;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  SampleBox box;

  ZeroTest with_box(SampleBox b) const {
    ZeroTest z = *this;
    z.box = std::move(b);
    return z;
  }
  ZeroTest with_tol(double t) const {
    ZeroTest z = *this;
    z.tol = t;
    return z;
  }
};

/// Uniform points in a box from a seeded 64-bit Mersenne twister.
class PointSampler {
 public:
  PointSampler(SampleBox box, std::size_t dim, std::uint64_t seed);
  std::vector<double> next();
  std::size_t dim() const noexcept { return dim_; }

 private:
  SampleBox box_;
  std::size_t dim_;
  std::mt19937_64 rng_;
};

/// Values of `exprs` at up to `trials` accepted points. Points where any
/// expression leaves its domain are redrawn, at most 10 * trials draws in
/// total. Throws DomainError when every draw is rejected.
struct SampledValues {
  std::vector<std::vector<double>> points;
  std::vector<std::vector<double>> values;  // values[point][expr]
};
SampledValues sample_values(std::span<const Expr> exprs, std::size_t dim, const ZeroTest& zt);

/// Dimension implied by the symbols of `exprs` and the box.
std::size_t sampling_dim(std::span<const Expr> exprs, const SampleBox& box);

/// True iff |e(p)| <= tol at every accepted sample point.
bool is_identically_zero(const Expr& e, const ZeroTest& zt = {});
bool all_identically_zero(std::span<const Expr> exprs, const ZeroTest& zt = {});

/// Largest |e(p)| over the accepted sample points of all `exprs`.
double sampled_sup_norm(std::span<const Expr> exprs, const ZeroTest& zt = {});

/// Deterministic point set for sup-norm estimates: box corners (when there
/// are at most count / 2 of them), the center, then uniform points.
std::vector<std::vector<double>> estimate_points(const SampleBox& box, std::size_t dim,
                                                 std::size_t count, std::uint64_t seed);

/// Largest |e(p)| over `points`; points outside the domain are skipped.
double sup_norm_at(std::span<const Expr> exprs, const std::vector<std::vector<double>>& points);

/// If `e` is numerically constant over the box, returns that constant
/// (recognized as a small rational when possible).
std::optional<Number> numeric_constant(const Expr& e, std::size_t dim, const ZeroTest& zt);

}  // namespace evoform
