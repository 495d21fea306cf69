#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "hyperdisk/geometry.hpp"

namespace hyperdisk {

/// Gauss-Legendre nodes/weights on [-1, 1], ascending nodes.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Cached rule; computing high orders repeatedly is wasteful.
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal panels.
template <class F>
auto integrate_gl(F&& f, double a, double b, int panels = 8, int order = 16) {
  using R = std::decay_t<decltype(f(a))>;
  const auto& rule = gauss_legendre(order);
  R sum{};
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    R part{};
    for (int i = 0; i < order; ++i) part += rule.weights[i] * f(lo + 0.5 * h * (rule.nodes[i] + 1.0));
    sum += 0.5 * h * part;
  }
  return sum;
}

/// Invariant-measure cubature on {|z| <= r_max}: Gauss-Legendre in the
/// hyperbolic radius u = artanh r (which crowds Euclidean nodes towards r_max)
/// times the periodic trapezoid rule in angle. Weights include the invariant
/// density (1-|z|^2)^{-2} of the unit convention.
class DiskQuadrature {
 public:
  DiskQuadrature(int n_r, int n_theta, double r_max) : n_r_(n_r), n_theta_(n_theta), r_max_(r_max) {
    if (!(r_max < 1.0)) throw std::invalid_argument("support must be compactly inside disk");
    if (!(r_max > 0.0)) throw std::invalid_argument("DiskQuadrature r_max must be positive");
    if (n_r < 1 || n_theta < 1) throw std::invalid_argument("DiskQuadrature needs n_r, n_theta >= 1");
    const auto& rule = gauss_legendre(n_r);
    const double u_max = std::atanh(r_max);
    nodes_.reserve(static_cast<std::size_t>(n_r) * n_theta);
    weights_.reserve(nodes_.capacity());
    radii_.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
      double u = 0.5 * u_max * (rule.nodes[i] + 1.0);
      double r = std::tanh(u);
      radii_[i] = r;
      // r dr / (1-r^2)^2 = sinh(u) cosh(u) du
      double wr = 0.5 * u_max * rule.weights[i] * 0.5 * std::sinh(2.0 * u);
      for (int j = 0; j < n_theta; ++j) {
        double th = two_pi * j / n_theta;
        nodes_.emplace_back(std::polar(r, th));
        weights_.push_back(wr * two_pi / n_theta);
      }
    }
  }

  /// Same rule carried by the translation 0 -> c. The invariant weights are
  /// unchanged; the covered region becomes the hyperbolic ball about c.
  DiskQuadrature centered_at(DiskPoint c) const {
    DiskQuadrature q = *this;
    auto g = MoebiusMap::translation_from_origin(c);
    for (auto& z : q.nodes_) z = mobius_apply(g, z);
    q.center_ = c;
    return q;
  }

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  double r_max() const { return r_max_; }
  DiskPoint center() const { return center_; }
  /// Hyperbolic radius (unit convention) of the covered ball about center().
  double covered_radius() const { return std::atanh(r_max_); }
  /// True when the unit-convention ball B(c, rho) lies inside the covered region.
  bool covers(DiskPoint c, double rho, double slack = 1e-12) const {
    return distance(c, center_, MetricConvention::unit()) + rho <= covered_radius() + slack;
  }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<DiskPoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& radii() const { return radii_; }

 private:
  int n_r_, n_theta_;
  double r_max_;
  DiskPoint center_;
  std::vector<DiskPoint> nodes_;
  std::vector<double> weights_;
  std::vector<double> radii_;
};

/// Closed-form invariant area of {|z| <= r} in the unit convention.
inline double invariant_disk_area(double r) { return pi * r * r / (1.0 - r * r); }

template <class F>
auto disk_integrate(F&& f, const DiskQuadrature& quad) {
  using R = std::decay_t<decltype(f(quad.nodes().front()))>;
  R sum{};
  const auto& z = quad.nodes();
  const auto& w = quad.weights();
  for (std::size_t i = 0; i < z.size(); ++i) sum += w[i] * f(z[i]);
  return sum;
}

/// N equispaced boundary nodes, each weighted 1/N (total mass 1).
class BoundaryQuadrature {
 public:
  explicit BoundaryQuadrature(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("BoundaryQuadrature needs N >= 1");
    nodes_.reserve(n);
    for (int j = 0; j < n; ++j) nodes_.emplace_back(two_pi * j / n);
  }
  int size() const { return n_; }
  const std::vector<BoundaryPoint>& nodes() const { return nodes_; }
  double weight() const { return 1.0 / n_; }

 private:
  int n_;
  std::vector<BoundaryPoint> nodes_;
};

template <class F>
auto boundary_integrate(F&& f, const BoundaryQuadrature& quad) {
  using R = std::decay_t<decltype(f(quad.nodes().front()))>;
  R sum{};
  for (const auto& b : quad.nodes()) sum += f(b);
  return sum * quad.weight();
}

}  // namespace hyperdisk
