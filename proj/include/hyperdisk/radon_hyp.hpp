#pragma once

// Geodesic X-ray transform on the disk in the curvature -1 convention
// (ds = 2|dz| / (1 - |z|^2)): forward integrals, averages over geodesics at
// distance p from a point, and three inversions (the d = 1 formula with
// 1/sinh p, the hyperbolic Abel route, and L S backprojection = -4 pi^2 f).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "abel.hpp"
#include "diagnostics.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "radon_euclid.hpp"

namespace hyperdisk {

inline constexpr MetricConvention kHyp = MetricConvention::curvature_minus_one();

/// Radial test inputs about a center c, in the distance rho = d(c, z).
class HypPhantom {
 public:
  enum class Kind { zero, radial_bump, ball_indicator, translated_bump };

  static HypPhantom zero() { return HypPhantom(Kind::zero, DiskPoint(), 1.0, 0.0); }
  /// a (1 - (rho/R)^2)^4 on rho < R about the origin.
  static HypPhantom radial_bump(double R = 1.5, double amplitude = 1.0) {
    return HypPhantom(Kind::radial_bump, DiskPoint(), R, amplitude);
  }
  static HypPhantom ball_indicator(double R = 1.0, DiskPoint c = DiskPoint(), double amplitude = 1.0) {
    return HypPhantom(Kind::ball_indicator, c, R, amplitude);
  }
  /// The radial bump moved to c.
  static HypPhantom translated_bump(DiskPoint c, double R = 0.8, double amplitude = 1.0) {
    return HypPhantom(Kind::translated_bump, c, R, amplitude);
  }

  /// Value as a function of the distance to the center.
  double profile(double rho) const {
    if (kind_ == Kind::zero || rho >= R_) return kind_ == Kind::ball_indicator && rho == R_ ? a_ : 0.0;
    if (kind_ == Kind::ball_indicator) return a_;
    double t = 1.0 - (rho / R_) * (rho / R_);
    return a_ * t * t * t * t;
  }

  double operator()(DiskPoint z) const {
    if (kind_ == Kind::zero) return 0.0;
    return profile(distance(center_, z, kHyp));
  }
  double operator()(Point2 x) const {
    if (x.x * x.x + x.y * x.y >= 1.0) return 0.0;
    return (*this)(DiskPoint(x.x, x.y));
  }

  Kind kind() const { return kind_; }
  DiskPoint center() const { return center_; }
  double radius() const { return R_; }
  double amplitude() const { return a_; }
  double peak() const { return kind_ == Kind::zero ? 0.0 : std::abs(a_); }
  /// Distance from the origin bounding the support.
  double support_distance() const { return distance(DiskPoint(), center_, kHyp) + R_; }

 private:
  HypPhantom(Kind k, DiskPoint c, double R, double a) : kind_(k), center_(c), R_(R), a_(a) {
    if (!(R > 0.0)) throw std::invalid_argument("phantom radius must be positive");
    if (!(support_distance() < 30.0)) throw std::invalid_argument("phantom support must stay inside the disk");
  }
  Kind kind_;
  DiskPoint center_;
  double R_;
  double a_;
};

inline const char* to_string(HypPhantom::Kind k) {
  switch (k) {
    case HypPhantom::Kind::zero: return "zero";
    case HypPhantom::Kind::radial_bump: return "bump";
    case HypPhantom::Kind::ball_indicator: return "ball";
    case HypPhantom::Kind::translated_bump: return "translated-bump";
  }
  return "?";
}

namespace detail {

/// Largest t >= 0 with d(0, point(t)) <= R on a geodesic whose closest point to
/// 0 is at t = 0, by bisection on the geometric distance.
inline double support_half_length(const Geodesic& g, double R) {
  auto dist = [&](double t) { return distance(DiskPoint(), geodesic_point(g, t, kHyp), kHyp); };
  double lo = 0.0, hi = 2.0 * R + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (dist(mid) <= R ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// int over g of f, where f vanishes outside the ball of radius R about 0.
template <class F>
double geodesic_integral(F&& f, const Geodesic& g, double R) {
  if (g.distance_from_origin(kHyp) >= R) return 0.0;
  const double T = support_half_length(g, R);
  const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * T / (0.1 * R))));
  return integrate_gl([&](double t) { return f(geodesic_point(g, t, kHyp)); }, -T, T, panels);
}

}  // namespace detail

/// Integral of f (supported within distance R of 0) over g in arc length.
template <class F>
double hyp_xray_forward(F&& f, const Geodesic& g, double R) {
  return detail::geodesic_integral(f, g, R);
}

/// Integral of a phantom over g, taken in the frame where its center is 0.
inline double hyp_xray_forward(const HypPhantom& f, const Geodesic& g) {
  if (f.kind() == HypPhantom::Kind::zero) return 0.0;
  const bool centered = f.center().modulus() == 0.0;
  Geodesic moved = centered ? g : mobius_apply(translate_to_origin(f.center()), g);
  return detail::geodesic_integral([&](DiskPoint z) { return f.profile(distance(DiskPoint(), z, kHyp)); }, moved,
                                   f.radius());
}

struct HypSinogramSpec {
  int n_psi = 180;
  double S = 3.0;
  double ds = 0.01;
};

/// Values on the geodesics from_normal(psi_k, s_j), psi_k = 2 pi k / n_psi and
/// s_j = j ds in [0, S]. Distances beyond S read as zero only when the
/// support distance is at most S.
class HypSinogram {
 public:
  HypSinogram() = default;
  HypSinogram(int n_psi, double S, int n_s, std::vector<double> values, double support_distance = INFINITY)
      : n_psi_(n_psi), n_s_(n_s), S_(S), values_(std::move(values)), support_(support_distance) {
    if (n_psi < 1 || n_s < 2) throw std::invalid_argument("HypSinogram needs >= 1 angle and >= 2 distances");
    if (!(S > 0.0)) throw std::invalid_argument("HypSinogram distance range must be positive");
    if (values_.size() != static_cast<std::size_t>(n_psi) * n_s)
      throw std::invalid_argument("HypSinogram value count does not match the grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("HypSinogram values must be finite");
    ds_ = S_ / (n_s_ - 1);
  }

  static int distances_for(const HypSinogramSpec& s) {
    if (!(s.S > 0.0 && s.ds > 0.0)) throw std::invalid_argument("sinogram S and ds must be positive");
    return static_cast<int>(std::lround(s.S / s.ds)) + 1;
  }

  int n_psi() const { return n_psi_; }
  int n_s() const { return n_s_; }
  double S() const { return S_; }
  double ds() const { return ds_; }
  double support_distance() const { return support_; }
  double psi(int k) const { return two_pi * k / n_psi_; }
  double s(int j) const { return j * ds_; }
  double value(int k, int j) const { return values_[static_cast<std::size_t>(k) * n_s_ + j]; }
  const std::vector<double>& values() const { return values_; }

  /// Bilinear interpolation, periodic in psi.
  double at(double psi, double s) const {
    if (s > S_ * (1.0 + 1e-12)) {
      if (support_ > S_)
        throw std::out_of_range("sinogram coverage gap: distance " + std::to_string(s) + " beyond S = " +
                                std::to_string(S_));
      return 0.0;
    }
    double u = std::clamp(s / ds_, 0.0, n_s_ - 1.0);
    int j = std::min(static_cast<int>(u), n_s_ - 2);
    double fj = u - j;
    double v = wrap_angle(psi) / two_pi * n_psi_;
    int k = static_cast<int>(v);
    double fk = v - k;
    k %= n_psi_;
    int k1 = (k + 1) % n_psi_;
    return (1.0 - fk) * ((1.0 - fj) * value(k, j) + fj * value(k, j + 1)) +
           fk * ((1.0 - fj) * value(k1, j) + fj * value(k1, j + 1));
  }

  double at(const Geodesic& g) const { return at(g.psi(), g.distance_from_origin(kHyp)); }

 private:
  int n_psi_ = 1, n_s_ = 2;
  double S_ = 1.0, ds_ = 1.0;
  std::vector<double> values_;
  double support_ = INFINITY;
};

/// Sinogram of a geodesic functional Geodesic -> double.
template <class F>
HypSinogram sample_hyp_sinogram(F&& geodesic_integral, const HypSinogramSpec& spec, double support_distance,
                                unsigned threads = 1) {
  const int np = spec.n_psi, ns = HypSinogram::distances_for(spec);
  const double ds = spec.S / (ns - 1);
  std::vector<double> v(static_cast<std::size_t>(np) * ns);
  parallel_for(static_cast<std::size_t>(np), [&](std::size_t k) {
    const double psi = two_pi * static_cast<double>(k) / np;
    for (int j = 0; j < ns; ++j) v[k * ns + j] = geodesic_integral(Geodesic::from_normal(psi, j * ds, kHyp));
  }, threads);
  return HypSinogram(np, spec.S, ns, std::move(v), support_distance);
}

inline HypSinogram hyp_sinogram(const HypPhantom& f, const HypSinogramSpec& spec, unsigned threads = 1) {
  return sample_hyp_sinogram([&](const Geodesic& g) { return hyp_xray_forward(f, g); }, spec,
                             f.support_distance(), threads);
}

/// Mean of a geodesic functional over the geodesics at distance p from x:
/// the geodesics at distance p from 0, moved by the translation 0 -> x.
template <class F>
double hyp_dual_of(F&& geodesic_value, DiskPoint x, double p, int n_dir = 180) {
  if (!(p >= 0.0)) throw std::invalid_argument("distance p must be nonnegative");
  const bool origin = x.modulus() == 0.0;
  const MoebiusMap to_x = MoebiusMap::translation_from_origin(x);
  double s = 0.0;
  for (int k = 0; k < n_dir; ++k) {
    Geodesic g = Geodesic::from_normal(two_pi * k / n_dir, p, kHyp);
    s += geodesic_value(origin ? g : mobius_apply(to_x, g));
  }
  return s / n_dir;
}

inline double hyp_dual_at_distance(const HypSinogram& sino, DiskPoint x, double p, int n_dir = 180) {
  return hyp_dual_of([&](const Geodesic& g) { return sino.at(g); }, x, p, n_dir);
}

/// Backprojection: the mean over geodesics through each grid node; zero
/// outside the disk.
inline GridFunction hyp_backprojection(const HypSinogram& sino, const ImageGrid& grid, int n_dir = 180,
                                       unsigned threads = 1) {
  return GridFunction::sample(
      grid,
      [&](Point2 x) {
        if (x.x * x.x + x.y * x.y >= 1.0 - 1e-12) return 0.0;
        return hyp_dual_at_distance(sino, DiskPoint(x.x, x.y), 0.0, n_dir);
      },
      INFINITY, threads);
}

struct HypInvertOptions {
  double dp = 0.01;
  int n_dir = 180;
};

namespace detail {

inline double hyp_reach(const HypSinogram& sino, DiskPoint x) {
  const double rx = distance(DiskPoint(), x, kHyp);
  const double reach = sino.support_distance() <= sino.S() ? rx + sino.support_distance() : sino.S() - rx;
  if (!(reach > 0.0)) throw std::out_of_range("sinogram coverage gap at this point");
  return reach;
}

}  // namespace detail

/// f(x) = -(1/pi) int_0^inf (1/sinh p) d/dp (f^)v_p(x) dp.
inline double hyp_invert_d1(const HypSinogram& sino, DiskPoint x, const HypInvertOptions& opt = {}) {
  const double pmax = detail::hyp_reach(sino, x);
  const auto n = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(pmax / opt.dp)) + 1, 5);
  std::vector<double> g(n), sh(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = hyp_dual_at_distance(sino, x, i * opt.dp, opt.n_dir);
    sh[i] = std::sinh(i * opt.dp);
  }
  return theorem_odd_constant(1) * detail::singular_derivative_integral(g, opt.dp, &sh);
}

/// (f^)v_p(x) re-indexed by t = cosh p on t = 1, 1 + dt, ..., cosh(reach).
inline RadialProfile hyp_dual_profile(const HypSinogram& sino, DiskPoint x, double dt = 0.005, int n_dir = 180) {
  const double tmax = std::cosh(detail::hyp_reach(sino, x));
  const auto n = std::max<std::size_t>(static_cast<std::size_t>(std::ceil((tmax - 1.0) / dt)) + 1, 2);
  std::vector<double> t(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 1.0 + i * dt;
    v[i] = hyp_dual_at_distance(sino, x, std::acosh(t[i]), n_dir);
  }
  return RadialProfile(std::move(t), std::move(v), t.back());
}

/// f(x) from its dual profile in t = cosh p (d = 1, 2): the hyperbolic Abel
/// inverse evaluated at r = 1.
inline double hyp_invert_theorem42(const RadialProfile& profile_hat, int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("hyperbolic Abel route supports d = 1, 2 only");
  if (profile_hat.front() != 1.0) throw std::invalid_argument("profile grid must start at t = 1");
  return abel_hyp_inverse(profile_hat, d).values().front();
}

/// Rule for S about 0 reaching distance 2 u_max (unit convention u_max).
inline DiskQuadrature bc_quadrature(int n_r = 48, int n_theta = 96, double u_max = 3.5) {
  return DiskQuadrature(n_r, n_theta, std::tanh(u_max));
}

/// (S f)(x) = int (coth d(x, y) - 1) f(y) dy in the curvature -1 convention.
/// The rule is carried to x, so the kernel singularity sits at the polar
/// origin, where (coth rho - 1) sinh rho = e^{-rho}.
template <class F>
double bc_operator(F&& fld, DiskPoint x, const DiskQuadrature& quad) {
  const DiskQuadrature q = quad.centered_at(x);
  const auto& nodes = q.nodes();
  const auto& w = q.weights();
  const int nt = q.n_theta();
  double sum = 0.0;
  for (int i = 0; i < q.n_r(); ++i) {
    const double r = q.radii()[static_cast<std::size_t>(i)];
    const double rho = 2.0 * std::atanh(r);
    // unit weight * 4 (curvature -1 area) * e^{-rho} / sinh rho
    const double k = 4.0 * std::exp(-rho) / std::sinh(rho);
    for (int j = 0; j < nt; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * nt + j;
      const DiskPoint& y = nodes[idx];
      sum += w[idx] * k * fld(Point2{y.x(), y.y()});
    }
  }
  return sum;
}

struct BcOptions {
  int n_backprojection = 256;
  int n_dir = 180;
  /// Euclidean step of the five-point Laplacian applied to S.
  double stencil_h = 0.05;
  DiskQuadrature quad = bc_quadrature();
  /// Interpolation of the backprojection inside S.
  Interpolation interpolation = Interpolation::bicubic;
};

/// f = L S (f^)v / (-4 pi^2), with (f^)v the backprojection over geodesics
/// through x weighted by total angle pi and L the Laplacian (1-|z|^2)^2/4 Delta.
inline GridFunction bc_invert(const HypSinogram& sino, const ImageGrid& grid, const BcOptions& opt = {},
                              unsigned threads = 1) {
  const double h = opt.stencil_h;
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (norm2(grid.node(k)) + h >= 0.99) throw std::invalid_argument("insufficient grid margin for the Laplacian stencil");
  const ImageGrid bp_grid = ImageGrid::square(opt.n_backprojection, 1.0);
  const GridFunction bp = hyp_backprojection(sino, bp_grid, opt.n_dir, threads);
  auto field = [&](Point2 p) { return pi * bp(p, opt.interpolation); };
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const Point2 z = grid.node(k);
    auto S = [&](double dx, double dy) { return bc_operator(field, DiskPoint(z.x + dx, z.y + dy), opt.quad); };
    const double lap = (S(h, 0.0) + S(-h, 0.0) + S(0.0, h) + S(0.0, -h) - 4.0 * S(0.0, 0.0)) / (h * h);
    const double c = 1.0 - (z.x * z.x + z.y * z.y);
    out[k] = c * c / 4.0 * lap / (-4.0 * pi * pi);
  }, threads);
  return GridFunction(grid, std::move(out), INFINITY);
}

}  // namespace hyperdisk
