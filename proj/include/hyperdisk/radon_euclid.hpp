#pragma once

// X-ray transform on R^2: line integrals, averages over lines at distance p
// from a point, and two inversions (the d = 1 formula with -1/pi and the
// fractional power of the Laplacian applied to the backprojection).

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
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

namespace hyperdisk {

/// {x : (x, omega) = p} with omega = (cos theta, sin theta).
struct Line {
  double theta = 0.0;
  double p = 0.0;

  Point2 omega() const { return {std::cos(theta), std::sin(theta)}; }
  /// Same line with p >= 0 and theta in [0, 2 pi).
  Line canonical() const { return p < 0 ? Line{wrap_angle(theta + pi), -p} : Line{wrap_angle(theta), p}; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

/// Test inputs on R^2, each supported in a disk about center().
class EuclidPhantom {
 public:
  enum class Kind { zero, gaussian, disk_indicator, bump };

  static EuclidPhantom zero() { return EuclidPhantom(Kind::zero, {}, 1.0, 0.0); }
  /// a exp(-|x-c|^2 / w^2), cut at |x - c| = 6 w.
  static EuclidPhantom gaussian(double width = 1.0, Point2 c = {}, double amplitude = 1.0) {
    if (!(width > 0.0)) throw std::invalid_argument("phantom width must be positive");
    return EuclidPhantom(Kind::gaussian, c, width, amplitude);
  }
  static EuclidPhantom disk_indicator(double radius = 1.0, Point2 c = {}, double amplitude = 1.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("phantom radius must be positive");
    return EuclidPhantom(Kind::disk_indicator, c, radius, amplitude);
  }
  /// a (1 - |x-c|^2 / r^2)^4 on |x - c| < r.
  static EuclidPhantom bump(double radius = 1.0, Point2 c = {}, double amplitude = 1.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("phantom radius must be positive");
    return EuclidPhantom(Kind::bump, c, radius, amplitude);
  }

  double operator()(Point2 x) const {
    const double dx = x.x - c_.x, dy = x.y - c_.y, r2 = dx * dx + dy * dy;
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::gaussian: return r2 >= 36.0 * s_ * s_ ? 0.0 : a_ * std::exp(-r2 / (s_ * s_));
      case Kind::disk_indicator: return r2 <= s_ * s_ ? a_ : 0.0;
      case Kind::bump: {
        double t = 1.0 - r2 / (s_ * s_);
        return t <= 0.0 ? 0.0 : a_ * t * t * t * t;
      }
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  Point2 center() const { return c_; }
  double scale() const { return s_; }
  double amplitude() const { return a_; }
  double peak() const { return kind_ == Kind::zero ? 0.0 : std::abs(a_); }
  double support_radius_about_center() const { return kind_ == Kind::gaussian ? 6.0 * s_ : s_; }
  /// Radius of a disk about 0 containing the support.
  double support_radius() const { return norm2(c_) + support_radius_about_center(); }

 private:
  EuclidPhantom(Kind k, Point2 c, double s, double a) : kind_(k), c_(c), s_(s), a_(a) {}
  Kind kind_;
  Point2 c_;
  double s_;
  double a_;
};

inline const char* to_string(EuclidPhantom::Kind k) {
  switch (k) {
    case EuclidPhantom::Kind::zero: return "zero";
    case EuclidPhantom::Kind::gaussian: return "gaussian";
    case EuclidPhantom::Kind::disk_indicator: return "disk";
    case EuclidPhantom::Kind::bump: return "bump";
  }
  return "?";
}

namespace detail {

/// Composite Gauss-Legendre over the chord of `line` through the disk (c, R).
template <class F>
double chord_integral(F&& f, const Line& line, Point2 c, double R, double panel_length) {
  const Point2 w = line.omega();
  const Point2 t{-w.y, w.x};
  const double dist = line.p - dot(c, w);
  if (std::abs(dist) >= R) return 0.0;
  const double half = std::sqrt(R * R - dist * dist);
  const Point2 foot{line.p * w.x, line.p * w.y};
  const double mid = dot(c, t);
  int panels = std::max(2, static_cast<int>(std::ceil(2.0 * half / panel_length)));
  return integrate_gl([&](double s) { return f(Point2{foot.x + s * t.x, foot.y + s * t.y}); }, mid - half,
                      mid + half, panels);
}

}  // namespace detail

/// Line integral of f, supported in {|x| <= R}.
template <class F>
double xray_forward(F&& f, const Line& line, double R) {
  return detail::chord_integral(f, line, Point2{}, R, 0.25);
}

/// Line integral of a phantom over the exact chord of its support disk.
inline double xray_forward(const EuclidPhantom& f, const Line& line) {
  if (f.kind() == EuclidPhantom::Kind::zero) return 0.0;
  double panel = f.kind() == EuclidPhantom::Kind::gaussian ? 0.25 * f.scale() : f.scale();
  return detail::chord_integral(f, line, f.center(), f.support_radius_about_center(), panel);
}

/// Trapezoid average of f over the circle of radius r about x.
template <class F>
double mean_value(F&& f, Point2 x, double r, int n = 256) {
  if (!(r >= 0.0)) throw std::invalid_argument("mean_value radius must be nonnegative");
  if (r == 0.0) return f(x);
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double a = two_pi * k / n;
    s += f(Point2{x.x + r * std::cos(a), x.y + r * std::sin(a)});
  }
  return s / n;
}

struct SinogramSpec {
  int n_angles = 180;
  double P = 6.0;
  double dp = 0.01;
};

/// Line integrals on n_angles uniform angles in [0, 2 pi) times offsets
/// -P, -P + dp, ..., P. Rows are angles. Offsets beyond P read as zero only
/// when support_radius <= P.
class Sinogram {
 public:
  Sinogram() = default;
  Sinogram(int n_angles, double P, int n_offsets, std::vector<double> values, double support_radius = INFINITY)
      : n_angles_(n_angles), n_offsets_(n_offsets), P_(P), values_(std::move(values)),
        support_radius_(support_radius) {
    if (n_angles < 1 || n_offsets < 2) throw std::invalid_argument("Sinogram needs >= 1 angle and >= 2 offsets");
    if (!(P > 0.0)) throw std::invalid_argument("Sinogram offset range must be positive");
    if (values_.size() != static_cast<std::size_t>(n_angles) * n_offsets)
      throw std::invalid_argument("Sinogram value count does not match the grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("Sinogram values must be finite");
    dp_ = 2.0 * P_ / (n_offsets_ - 1);
  }

  static int offsets_for(const SinogramSpec& s) {
    if (!(s.P > 0.0 && s.dp > 0.0)) throw std::invalid_argument("sinogram P and dp must be positive");
    return static_cast<int>(std::lround(2.0 * s.P / s.dp)) + 1;
  }

  int n_angles() const { return n_angles_; }
  int n_offsets() const { return n_offsets_; }
  double P() const { return P_; }
  double dp() const { return dp_; }
  double support_radius() const { return support_radius_; }
  double angle(int k) const { return two_pi * k / n_angles_; }
  double offset(int i) const { return -P_ + i * dp_; }
  double value(int k, int i) const { return values_[static_cast<std::size_t>(k) * n_offsets_ + i]; }
  const std::vector<double>& values() const { return values_; }

  /// Linear interpolation in the offset on angle row k.
  double at(int k, double s) const {
    double u = (s + P_) / dp_;
    if (u < 0.0 || u > n_offsets_ - 1) {
      if (std::abs(s) <= P_ * (1.0 + 1e-12))
        u = std::clamp(u, 0.0, n_offsets_ - 1.0);
      else if (support_radius_ > P_)
        throw_window(s);
      else
        return 0.0;
    }
    int i = std::min(static_cast<int>(u), n_offsets_ - 2);
    double f = u - i;
    return (1.0 - f) * value(k, i) + f * value(k, i + 1);
  }

 private:
  [[noreturn]] void throw_window(double s) const {
    throw std::out_of_range("sinogram window too small: offset " + std::to_string(s) + " outside [-" +
                            std::to_string(P_) + ", " + std::to_string(P_) + "]");
  }

  int n_angles_ = 1, n_offsets_ = 2;
  double P_ = 1.0, dp_ = 2.0;
  std::vector<double> values_;
  double support_radius_ = INFINITY;
};

/// Sinogram of an arbitrary line functional Line -> double.
template <class F>
Sinogram sample_sinogram(F&& line_integral, const SinogramSpec& spec, double support_radius, unsigned threads = 1) {
  const int na = spec.n_angles, no = Sinogram::offsets_for(spec);
  const double dp = 2.0 * spec.P / (no - 1);
  std::vector<double> v(static_cast<std::size_t>(na) * no);
  parallel_for(static_cast<std::size_t>(na), [&](std::size_t k) {
    const double th = two_pi * static_cast<double>(k) / na;
    for (int i = 0; i < no; ++i) v[k * no + i] = line_integral(Line{th, -spec.P + i * dp});
  }, threads);
  return Sinogram(na, spec.P, no, std::move(v), support_radius);
}

inline Sinogram euclid_sinogram(const EuclidPhantom& f, const SinogramSpec& spec, unsigned threads = 1) {
  return sample_sinogram([&](const Line& l) { return xray_forward(f, l); }, spec, f.support_radius(), threads);
}

/// Average of the sinogram over lines at distance p from x:
/// mean over angles of f^(omega, (x, omega) + p).
inline double dual_at_distance(const Sinogram& sino, Point2 x, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("distance p must be nonnegative");
  double s = 0.0;
  for (int k = 0; k < sino.n_angles(); ++k) {
    const double th = sino.angle(k);
    s += sino.at(k, x.x * std::cos(th) + x.y * std::sin(th) + p);
  }
  return s / sino.n_angles();
}

/// Backprojection: the dual transform at p = 0 sampled on a grid.
inline GridFunction euclid_backprojection(const Sinogram& sino, const ImageGrid& grid, unsigned threads = 1) {
  return GridFunction::sample(grid, [&](Point2 x) { return dual_at_distance(sino, x, 0.0); }, INFINITY, threads);
}

namespace detail {

/// int_0^pmax g'(p)/p dp for an even g sampled at p_i = i h; the value at 0
/// is g''(0) from the even fit a + b p^2 + c p^4 through p = 0, h, 2h.
inline double singular_derivative_integral(const std::vector<double>& g, double h,
                                           const std::vector<double>* weight_inv = nullptr) {
  const std::size_t n = g.size();
  if (n < 5) throw std::invalid_argument("need at least 5 samples of the dual transform");
  auto at = [&](long i) { return g[static_cast<std::size_t>(std::abs(i))]; };
  auto last = static_cast<long>(n) - 1;
  std::vector<double> q(n);
  q[0] = (32.0 * g[1] - 2.0 * g[2] - 30.0 * g[0]) / (12.0 * h * h);
  for (long i = 1; i <= last; ++i) {
    double d;
    if (i + 2 <= last)
      d = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
    else if (i + 1 <= last)
      d = (at(i + 1) - at(i - 1)) / (2.0 * h);
    else
      d = (at(i) - at(i - 1)) / h;
    double denom = weight_inv ? (*weight_inv)[static_cast<std::size_t>(i)] : i * h;
    q[static_cast<std::size_t>(i)] = d / denom;
  }
  // composite Simpson, trapezoid on a leftover interval
  double s = 0.0;
  std::size_t m = (n - 1) % 2 == 0 ? n - 1 : n - 2;
  for (std::size_t i = 0; i + 2 <= m; i += 2) s += h / 3.0 * (q[i] + 4.0 * q[i + 1] + q[i + 2]);
  if (m < n - 1) s += 0.5 * h * (q[n - 2] + q[n - 1]);
  return s;
}

}  // namespace detail

struct InvertD1Options {
  double dp = 0.01;
};

/// f(x) = -(1/pi) int_0^inf (1/p) d/dp (f^)v_p(x) dp, truncated where the
/// averaged lines leave the support (or at P - |x| when the support is unknown).
inline double invert_d1(const Sinogram& sino, Point2 x, const InvertD1Options& opt = {}) {
  const double rx = norm2(x);
  const double pmax = sino.support_radius() <= sino.P() ? rx + sino.support_radius() : sino.P() - rx;
  if (!(pmax > 0.0)) throw std::out_of_range("sinogram window too small for reconstruction at this point");
  const auto n = static_cast<std::size_t>(std::ceil(pmax / opt.dp)) + 1;
  std::vector<double> g(std::max<std::size_t>(n, 5));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = dual_at_distance(sino, x, i * opt.dp);
  return -detail::singular_derivative_integral(g, opt.dp) / pi;
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace detail

/// c = Gamma((n-d)/2) / ((4 pi)^{d/2} Gamma(n/2)) for d = 1, n = 2.
inline double fractional_constant() { return std::tgamma(0.5) / (std::sqrt(4.0 * pi) * std::tgamma(1.0)); }

/// Applies c (-L)^{1/2} to a grid field through the spectral multiplier |xi|
/// on a zero-padded periodic grid of padding * n nodes per axis.
inline GridFunction apply_half_laplacian(const GridFunction& b, int padding = 2, double c = 1.0) {
  if (padding < 2) throw std::invalid_argument("fractional inversion needs padding >= 2 to avoid wraparound");
  const ImageGrid& g = b.grid();
  const int nx = g.nx() * padding, ny = g.ny() * padding, nxc = nx / 2 + 1;
  std::unique_ptr<double, decltype(&fftw_free)> real(fftw_alloc_real(static_cast<std::size_t>(nx) * ny), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> spec(
      fftw_alloc_complex(static_cast<std::size_t>(ny) * nxc), &fftw_free);
  fftw_plan fwd, bwd;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_2d(ny, nx, real.get(), spec.get(), FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(ny, nx, spec.get(), real.get(), FFTW_ESTIMATE);
  }
  std::fill(real.get(), real.get() + static_cast<std::size_t>(nx) * ny, 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) real.get()[static_cast<std::size_t>(j) * nx + i] = b.at(i, j);
  fftw_execute(fwd);
  const double kx = two_pi / (nx * g.dx()), ky = two_pi / (ny * g.dy());
  const double norm = c / (static_cast<double>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    double fy = (j <= ny / 2 ? j : j - ny) * ky;
    for (int i = 0; i < nxc; ++i) {
      double fx = i * kx;
      double m = std::hypot(fx, fy) * norm;
      auto& z = spec.get()[static_cast<std::size_t>(j) * nxc + i];
      z[0] *= m;
      z[1] *= m;
    }
  }
  fftw_execute(bwd);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  std::vector<double> out(g.size());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out[g.index(i, j)] = real.get()[static_cast<std::size_t>(j) * nx + i];
  return GridFunction(g, std::move(out), b.support_radius());
}

/// f = c (-L)^{1/2} (f^)v with c = 1/2 (d = 1, n = 2).
inline GridFunction invert_fractional(const Sinogram& sino, const ImageGrid& grid, int padding = 2,
                                      unsigned threads = 1) {
  if (padding < 2) throw std::invalid_argument("fractional inversion needs padding >= 2 to avoid wraparound");
  GridFunction back = euclid_backprojection(sino, grid, threads);
  GridFunction f = apply_half_laplacian(back, padding, fractional_constant());
  return GridFunction(grid, f.values(), sino.support_radius());
}

/// C_1 for d = 2: f(x) = C_1 [(d/dr)^2 (f^)v_r(x)]_{r=0}.
inline double theorem_even_constant(int d) {
  if (d != 2) throw std::invalid_argument("even-d inversion supports d = 2 only");
  return -abel_constant(2) / 4.0;
}

/// C_2 for d = 1, 3: f(x) = C_2 [(d/d(r^2))^{(d-1)/2} int_r^inf (p^2-r^2)^{-1/2} d/dp (f^)v_p dp]_{r=0}.
inline double theorem_odd_constant(int d) {
  if (d == 1) return abel_constant(1) / 2.0;
  if (d == 3) return -abel_constant(3) / 4.0;
  throw std::invalid_argument("odd-d inversion supports d = 1, 3 only");
}

/// F(0) from Fhat = (f^)v_r on a grid starting at r = 0 (d = 2).
inline double invert_profile_even_d(const RadialProfile& fhat, int d) {
  const double c = theorem_even_constant(d);
  detail::check_density(fhat, d);
  if (fhat.front() != 0.0) throw std::invalid_argument("profile grid must start at r = 0");
  RadialProfile even(fhat.grid(), fhat.values(), fhat.cutoff(), Parity::even);
  return c * even.derivative_at(0, 2);
}

/// F(0) from Fhat = (f^)v_p on a grid starting at p = 0 (d = 1 or 3).
inline double invert_profile_odd_d(const RadialProfile& fhat, int d) {
  const double c = theorem_odd_constant(d);
  detail::check_density(fhat, d);
  if (fhat.front() != 0.0) throw std::invalid_argument("profile grid must start at p = 0");
  RadialProfile even(fhat.grid(), fhat.values(), fhat.cutoff(), Parity::even);
  RadialProfile deriv = even.derivative();
  if (d == 1) return c * detail::half_order_integral(deriv, 0.0);
  const auto& grid = fhat.grid();
  std::vector<double> h(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) h[i] = detail::half_order_integral(deriv, grid[i]);
  RadialProfile H(grid, std::move(h), fhat.cutoff(), Parity::even);
  return c * H.derivative_in_square().values().front();
}

}  // namespace hyperdisk
