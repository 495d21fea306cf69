#pragma once

// Uniform planar grids and sampled fields on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace hyperdisk {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm2(Point2 p) { return std::hypot(p.x, p.y); }

/// Nodes (x0 + i dx, y0 + j dy) for 0 <= i < nx, 0 <= j < ny.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int nx, int ny, double x0, double y0, double dx, double dy)
      : nx_(nx), ny_(ny), x0_(x0), y0_(y0), dx_(dx), dy_(dy) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("ImageGrid needs at least 2 nodes per axis");
    if (!(dx > 0.0 && dy > 0.0)) throw std::invalid_argument("ImageGrid spacing must be positive");
  }

  /// n x n nodes with spacing 2H/n starting at -H, so 0 is a node for even n
  /// and the grid tiles periodically with period 2H.
  static ImageGrid square(int n, double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("ImageGrid half width must be positive");
    double h = 2.0 * half_width / n;
    return ImageGrid(n, n, -half_width, -half_width, h, h);
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x(int i) const { return x0_ + i * dx_; }
  double y(int j) const { return y0_ + j * dy_; }
  double x_max() const { return x(nx_ - 1); }
  double y_max() const { return y(ny_ - 1); }
  Point2 node(int i, int j) const { return {x(i), y(j)}; }
  Point2 node(std::size_t k) const { return node(static_cast<int>(k % nx_), static_cast<int>(k / nx_)); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

 private:
  int nx_ = 2, ny_ = 2;
  double x0_ = 0.0, y0_ = 0.0, dx_ = 1.0, dy_ = 1.0;
};

enum class Interpolation { bilinear, bicubic };

/// Row-major samples on an ImageGrid (row j holds y = y(j)), zero outside the
/// grid rectangle. support_radius records the radius of the disk about 0
/// outside of which the sampled function is known to vanish.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(ImageGrid grid, std::vector<double> values, double support_radius = INFINITY)
      : grid_(grid), values_(std::move(values)), support_radius_(support_radius) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("GridFunction value count does not match grid");
  }

  template <class F>
  static GridFunction sample(const ImageGrid& grid, F&& f, double support_radius = INFINITY, unsigned threads = 1) {
    std::vector<double> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) { v[k] = f(grid.node(k)); }, threads);
    return GridFunction(grid, std::move(v), support_radius);
  }

  const ImageGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double support_radius() const { return support_radius_; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double operator()(Point2 p, Interpolation mode = Interpolation::bilinear) const {
    return mode == Interpolation::bilinear ? bilinear(p) : bicubic(p);
  }

  double bilinear(Point2 p) const {
    double u = (p.x - grid_.x0()) / grid_.dx(), v = (p.y - grid_.y0()) / grid_.dy();
    int i = static_cast<int>(std::floor(u)), j = static_cast<int>(std::floor(v));
    double fu = u - i, fv = v - j;
    return (1 - fu) * (1 - fv) * get(i, j) + fu * (1 - fv) * get(i + 1, j) + (1 - fu) * fv * get(i, j + 1) +
           fu * fv * get(i + 1, j + 1);
  }

  /// Keys cubic convolution (a = -1/2), third order for smooth data.
  double bicubic(Point2 p) const {
    double u = (p.x - grid_.x0()) / grid_.dx(), v = (p.y - grid_.y0()) / grid_.dy();
    int i = static_cast<int>(std::floor(u)), j = static_cast<int>(std::floor(v));
    double wu[4], wv[4];
    keys_weights(u - i, wu);
    keys_weights(v - j, wv);
    double s = 0.0;
    for (int b = 0; b < 4; ++b) {
      double row = 0.0;
      for (int a = 0; a < 4; ++a) row += wu[a] * get(i - 1 + a, j - 1 + b);
      s += wv[b] * row;
    }
    return s;
  }

 private:
  double get(int i, int j) const {
    if (i < 0 || j < 0 || i >= grid_.nx() || j >= grid_.ny()) return 0.0;
    return values_[grid_.index(i, j)];
  }
  static void keys_weights(double t, double* w) {
    auto k = [](double s) {
      s = std::abs(s);
      if (s < 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
      if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
      return 0.0;
    };
    w[0] = k(t + 1.0);
    w[1] = k(t);
    w[2] = k(1.0 - t);
    w[3] = k(2.0 - t);
  }

  ImageGrid grid_;
  std::vector<double> values_;
  double support_radius_ = INFINITY;
};

}  // namespace hyperdisk
