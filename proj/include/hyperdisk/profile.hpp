#pragma once

// Sampled one-dimensional radial profiles with local polynomial interpolation
// and finite-difference derivatives on arbitrary (increasing) grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperdisk {

/// Finite-difference weights (Fornberg 1988). Returns w[k][j], the weight of
/// sample x[j] in the k-th derivative at x0, for k = 0..max_order.
inline std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x,
                                                         int max_order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Parity of a profile about the origin; used to extend stencils below grid[0] = 0.
enum class Parity { none, even, odd };

/// Samples F(q_i) on a strictly increasing grid. Beyond `cutoff` the profile is
/// treated as identically zero.
class RadialProfile {
 public:
  static constexpr int interpolation_points = 6;
  static constexpr int derivative_points = 7;

  RadialProfile() = default;
  RadialProfile(std::vector<double> grid, std::vector<double> values, double cutoff,
                Parity parity = Parity::none)
      : grid_(std::move(grid)), values_(std::move(values)), cutoff_(cutoff), parity_(parity) {
    if (grid_.size() != values_.size())
      throw std::invalid_argument("RadialProfile grid/value size mismatch");
    if (grid_.size() < 2) throw std::invalid_argument("RadialProfile needs at least 2 samples");
    for (std::size_t i = 1; i < grid_.size(); ++i)
      if (!(grid_[i] > grid_[i - 1]))
        throw std::invalid_argument("RadialProfile grid must be strictly increasing");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("RadialProfile values must be finite");
    if (parity_ != Parity::none && grid_.front() != 0.0)
      throw std::invalid_argument("symmetric RadialProfile must start at 0");
    if (!(cutoff_ <= grid_.back())) cutoff_ = grid_.back();
  }

  /// Uniform grid a, a+h, ..., b sampled from f.
  template <class F>
  static RadialProfile sample(F&& f, double a, double b, std::size_t n, Parity parity = Parity::none) {
    std::vector<double> g(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      v[i] = f(g[i]);
    }
    return RadialProfile(std::move(g), std::move(v), b, parity);
  }

  template <class F>
  static RadialProfile sample_on(F&& f, std::vector<double> grid, Parity parity = Parity::none) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    double cut = grid.back();
    return RadialProfile(std::move(grid), std::move(v), cut, parity);
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double cutoff() const { return cutoff_; }
  Parity parity() const { return parity_; }
  std::size_t size() const { return grid_.size(); }
  double front() const { return grid_.front(); }

  /// Local 6-point Lagrange interpolant; zero beyond the cutoff.
  double operator()(double q) const {
    if (parity_ != Parity::none && q < 0.0) return parity_ == Parity::odd ? -(*this)(-q) : (*this)(-q);
    if (q > cutoff_) return 0.0;
    std::size_t i = bracket(q);
    double xs[interpolation_points], ys[interpolation_points];
    fill_stencil(static_cast<long>(i) - interpolation_points / 2 + 1, interpolation_points, xs, ys);
    double sum = 0.0;
    for (int j = 0; j < interpolation_points; ++j) {
      double l = 1.0;
      for (int k = 0; k < interpolation_points; ++k)
        if (k != j) l *= (q - xs[k]) / (xs[j] - xs[k]);
      sum += l * ys[j];
    }
    return sum;
  }

  /// k-th derivative at grid node i from a 7-point stencil (centred where possible).
  double derivative_at(std::size_t i, int k) const {
    double xs[derivative_points], ys[derivative_points];
    fill_stencil(static_cast<long>(i) - derivative_points / 2, derivative_points, xs, ys);
    auto w = fornberg_weights(grid_[i], std::span<const double>(xs, derivative_points), k);
    double s = 0.0;
    for (int j = 0; j < derivative_points; ++j) s += w[k][j] * ys[j];
    return s;
  }

  /// Profile of dF/dq on the same grid.
  RadialProfile derivative() const {
    std::vector<double> d(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) d[i] = derivative_at(i, 1);
    return RadialProfile(grid_, std::move(d), cutoff_, flipped(parity_));
  }

  /// Profile of dF/d(q^2) = (1/2q) dF/dq; at q = 0 (even profiles) F''(0)/2.
  RadialProfile derivative_in_square() const {
    std::vector<double> d(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (grid_[i] == 0.0) {
        if (parity_ != Parity::even)
          throw std::domain_error("d/d(r^2) at r = 0 requires an even profile");
        d[i] = 0.5 * derivative_at(i, 2);
      } else {
        d[i] = derivative_at(i, 1) / (2.0 * grid_[i]);
      }
    }
    return RadialProfile(grid_, std::move(d), cutoff_, parity_ == Parity::even ? Parity::even : Parity::none);
  }

  /// Largest |F| over the last `fraction` of the grid, a proxy for the tail
  /// discarded at the cutoff.
  double tail_level(double fraction = 0.05) const {
    std::size_t n = grid_.size();
    std::size_t start = n - std::max<std::size_t>(1, static_cast<std::size_t>(fraction * n));
    double m = 0.0;
    for (std::size_t i = start; i < n; ++i) m = std::max(m, std::abs(values_[i]));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  static Parity flipped(Parity p) {
    switch (p) {
      case Parity::even: return Parity::odd;
      case Parity::odd: return Parity::even;
      default: return Parity::none;
    }
  }

  std::size_t bracket(double q) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), q);
    if (it == grid_.begin()) return 0;
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - grid_.begin() - 1,
                                                             static_cast<std::ptrdiff_t>(grid_.size()) - 2));
  }

  // Fills `count` consecutive samples starting at logical index `start`. With a
  // parity, negative indices mirror about 0; otherwise the window is shifted
  // to stay inside the grid.
  void fill_stencil(long start, int count, double* xs, double* ys) const {
    const long n = static_cast<long>(grid_.size());
    if (count > n) throw std::invalid_argument("RadialProfile has too few samples for the stencil");
    if (parity_ == Parity::none && start < 0) start = 0;
    if (start + count > n) start = n - count;
    if (parity_ != Parity::none && start < -(n - 1)) start = -(n - 1);
    const double sign = parity_ == Parity::odd ? -1.0 : 1.0;
    for (int j = 0; j < count; ++j) {
      long idx = start + j;
      if (idx < 0) {
        xs[j] = -grid_[-idx];
        ys[j] = sign * values_[-idx];
      } else {
        xs[j] = grid_[idx];
        ys[j] = values_[idx];
      }
    }
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  double cutoff_ = 0.0;
  Parity parity_ = Parity::none;
};

}  // namespace hyperdisk
