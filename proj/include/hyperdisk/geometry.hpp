#pragma once

// Poincare disk model: points, boundary, SU(1,1) action, distances,
// horocycle bracket and geodesics.

#include <algorithm>
#include <limits>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyperdisk {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

/// Metric normalisation. `unit` is ds^2 = |dz|^2/(1-|z|^2)^2 (curvature -4),
/// `curvature_minus_one` is ds^2 = 4|dz|^2/(1-|z|^2)^2.
class MetricConvention {
 public:
  static constexpr MetricConvention unit() { return MetricConvention(1); }
  static constexpr MetricConvention curvature_minus_one() { return MetricConvention(4); }

  static MetricConvention from_scale(int scale) {
    if (scale != 1 && scale != 4)
      throw std::invalid_argument("metric scale must be 1 or 4, got " + std::to_string(scale));
    return MetricConvention(scale);
  }

  constexpr int scale() const { return scale_; }
  /// Multiplier converting scale-1 lengths into lengths of this convention.
  constexpr double length_factor() const { return scale_ == 1 ? 1.0 : 2.0; }

  friend constexpr bool operator==(MetricConvention, MetricConvention) = default;

 private:
  constexpr explicit MetricConvention(int s) : scale_(s) {}
  int scale_;
};

/// A point of the open unit disk.
class DiskPoint {
 public:
  DiskPoint() = default;
  explicit DiskPoint(cplx z) : z_(z) {
    if (!(std::norm(z) < 1.0))
      throw std::invalid_argument("DiskPoint requires |z| < 1");
  }
  DiskPoint(double x, double y) : DiskPoint(cplx(x, y)) {}

  cplx z() const { return z_; }
  double x() const { return z_.real(); }
  double y() const { return z_.imag(); }
  double modulus() const { return std::abs(z_); }
  /// 1 - |z|^2 without cancellation for |z| near 1.
  double conformal_gap() const {
    double r = std::abs(z_);
    return (1.0 - r) * (1.0 + r);
  }

 private:
  cplx z_{0.0, 0.0};
};

/// A point b = e^{i theta} of the boundary circle.
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double theta) : theta_(wrap_angle(theta)) {}

  double theta() const { return theta_; }
  cplx b() const { return std::polar(1.0, theta_); }

 private:
  double theta_ = 0.0;
};

/// z -> (a z + b) / (conj(b) z + conj(a)) with |a|^2 - |b|^2 = 1.
class MoebiusMap {
 public:
  MoebiusMap() = default;
  MoebiusMap(cplx a, cplx b) : a_(a), b_(b) {
    double det = std::norm(a_) - std::norm(b_);
    if (!(det > 0.0) || !std::isfinite(det))
      throw std::invalid_argument("MoebiusMap requires |a|^2 - |b|^2 > 0");
    renormalize();
  }

  static MoebiusMap identity() { return MoebiusMap(); }
  static MoebiusMap rotation(double angle) {
    return MoebiusMap(std::polar(1.0, angle / 2), cplx(0.0, 0.0));
  }
  /// The map sending 0 to `c` along the geodesic through 0 and c:
  /// z -> (z + c) / (1 + conj(c) z).
  static MoebiusMap translation_from_origin(DiskPoint c) {
    double s = std::sqrt(c.conformal_gap());
    return MoebiusMap(cplx(1.0 / s, 0.0), c.z() / s);
  }

  cplx a() const { return a_; }
  cplx b() const { return b_; }

  cplx apply(cplx z) const { return (a_ * z + b_) / (std::conj(b_) * z + std::conj(a_)); }

  MoebiusMap inverse() const { return MoebiusMap(std::conj(a_), -b_); }

  /// (this o other)(z) = this(other(z)).
  MoebiusMap compose(const MoebiusMap& other) const {
    // matrices [[a, b], [conj b, conj a]] multiply within SU(1,1)
    cplx na = a_ * other.a_ + b_ * std::conj(other.b_);
    cplx nb = a_ * other.b_ + b_ * std::conj(other.a_);
    return MoebiusMap(na, nb);
  }

  /// | |a|^2 - |b|^2 - 1 |
  double determinant_defect() const { return std::abs(std::norm(a_) - std::norm(b_) - 1.0); }

 private:
  void renormalize() {
    double s = std::sqrt(std::norm(a_) - std::norm(b_));
    a_ /= s;
    b_ /= s;
  }

  cplx a_{1.0, 0.0};
  cplx b_{0.0, 0.0};
};

inline DiskPoint mobius_apply(const MoebiusMap& g, DiskPoint z) {
  cplx w = g.apply(z.z());
  // rounding can push |w| to 1 only for |z| within ~1e-16 of the boundary
  double m = std::abs(w);
  if (m >= 1.0) w *= (1.0 - 4.0 * std::numeric_limits<double>::epsilon()) / m;
  return DiskPoint(w);
}

/// Disk automorphism sending `a` to 0. Convention: z -> (z - a)/(1 - conj(a) z),
/// i.e. minus the classical map (a - z)/(1 - conj(a) z); it fixes the direction
/// of the geodesic through 0 and a, and maps 0 to -a.
inline MoebiusMap translate_to_origin(DiskPoint a) {
  double s = std::sqrt(a.conformal_gap());
  return MoebiusMap(cplx(1.0 / s, 0.0), -a.z() / s);
}

/// Hyperbolic distance. Uses sinh(d_1) = |z-w| / sqrt((1-|z|^2)(1-|w|^2)) for
/// the unit convention, which keeps full relative precision for close points.
inline double distance(DiskPoint z, DiskPoint w, MetricConvention m) {
  double num = std::abs(z.z() - w.z());
  double den = std::sqrt(z.conformal_gap() * w.conformal_gap());
  return m.length_factor() * std::asinh(num / den);
}

/// Signed distance from 0 to the horocycle through z tangent at b.
/// Unit convention: <z,b> = (1/2) log((1-|z|^2)/|z-b|^2).
inline double horocycle_bracket(DiskPoint z, BoundaryPoint b, MetricConvention m) {
  double v = 0.5 * std::log(z.conformal_gap() / std::norm(z.z() - b.b()));
  return m.length_factor() * v;
}

/// Euclidean radius of the point at hyperbolic distance d from 0.
inline double radius_at_distance(double d, MetricConvention m) {
  return std::tanh(d / m.length_factor());
}

/// Hyperbolic distance of the point at Euclidean radius r from 0.
inline double distance_from_origin(double r, MetricConvention m) {
  return m.length_factor() * std::atanh(r);
}

/// The horocycle {z : <z,b> = s}: Euclidean circle tangent to B at b.
struct Horocycle {
  BoundaryPoint b;
  double s = 0.0;
  MetricConvention metric = MetricConvention::unit();

  /// Euclidean centre and radius of the level set.
  cplx euclidean_center() const { return (1.0 - euclidean_radius()) * b.b(); }
  double euclidean_radius() const {
    // the level set meets the diameter through b at r_b with artanh(r_b) = s_1
    double r_b = std::tanh(s / metric.length_factor());
    return 0.5 * (1.0 - r_b);
  }
};

/// A complete geodesic, identified by its ideal endpoints.
///
/// Internally it is also stored as the image of a diameter: the point closest to
/// the origin sits at Euclidean radius `closest_radius` in direction `psi`, and
/// the geodesic is the translate of the diameter orthogonal to that direction.
class Geodesic {
 public:
  static constexpr double diameter_tolerance = 1e-9;

  Geodesic(BoundaryPoint alpha, BoundaryPoint beta) : alpha_(alpha), beta_(beta) {
    double sep = wrap_angle(beta.theta() - alpha.theta());  // ccw arc alpha -> beta
    if (sep < 1e-14 || two_pi - sep < 1e-14)
      throw std::invalid_argument("degenerate geodesic: coincident endpoints");
    // the short arc between the endpoints determines the side of the carrier circle
    double half = (sep <= pi ? sep : two_pi - sep) / 2;  // in (0, pi/2]
    double mid = sep <= pi ? alpha.theta() + sep / 2 : beta.theta() + (two_pi - sep) / 2;
    diameter_ = std::abs(sep - pi) < diameter_tolerance;
    if (diameter_) {
      psi_ = wrap_angle(alpha.theta() + pi / 2);
      closest_radius_ = 0.0;
      half_angle_ = pi / 2;
    } else {
      psi_ = wrap_angle(mid);
      half_angle_ = half;
      closest_radius_ = std::tan(pi / 4 - half / 2);
    }
    orient();
  }

  /// The geodesic whose closest point to 0 is at distance `s` (in metric m)
  /// in direction `psi`.
  static Geodesic from_normal(double psi, double s, MetricConvention m) {
    if (s < 0.0) {
      s = -s;
      psi += pi;
    }
    double r0 = std::tanh(s / m.length_factor());
    // endpoints at psi +- theta with sin(theta) = 1/cosh(s_4) = (1-r0^2)/(1+r0^2)
    double theta = std::asin((1.0 - r0 * r0) / (1.0 + r0 * r0));
    Geodesic g(BoundaryPoint(psi - theta), BoundaryPoint(psi + theta), psi, r0, theta);
    return g;
  }

  BoundaryPoint alpha() const { return alpha_; }
  BoundaryPoint beta() const { return beta_; }
  bool is_diameter() const { return diameter_; }
  /// Direction of the point closest to the origin.
  double psi() const { return psi_; }
  double closest_radius() const { return closest_radius_; }
  /// Distance from the origin to the geodesic.
  double distance_from_origin(MetricConvention m) const {
    return m.length_factor() * std::atanh(closest_radius_);
  }
  /// Euclidean centre of the carrier circle (meaningless for diameters).
  cplx center() const { return std::polar(1.0 / std::cos(half_angle_), psi_); }
  /// Euclidean radius of the carrier circle (infinite for diameters).
  double radius() const { return diameter_ ? INFINITY : std::tan(half_angle_); }

  /// Closest point to the origin mapped to the diameter tangent direction.
  MoebiusMap frame() const {
    return MoebiusMap::translation_from_origin(DiskPoint(std::polar(closest_radius_, psi_)));
  }
  /// Unit vector of the diameter that `frame()` carries onto this geodesic,
  /// oriented so that t -> +inf tends to beta.
  cplx direction() const { return direction_; }

 private:
  Geodesic(BoundaryPoint a, BoundaryPoint b, double psi, double r0, double half)
      : alpha_(a), beta_(b), diameter_(r0 == 0.0), psi_(wrap_angle(psi)),
        closest_radius_(r0), half_angle_(half) {
    orient();
  }

  void orient() {
    cplx d = std::polar(1.0, psi_ + pi / 2);
    cplx end = frame().apply(d);  // image of the boundary point d
    if (std::abs(end - beta_.b()) > std::abs(end - alpha_.b())) d = -d;
    direction_ = d;
  }

  BoundaryPoint alpha_, beta_;
  bool diameter_ = false;
  double psi_ = 0.0;
  double closest_radius_ = 0.0;
  double half_angle_ = pi / 2;
  cplx direction_{1.0, 0.0};
};

inline Geodesic geodesic_from_endpoints(BoundaryPoint alpha, BoundaryPoint beta) {
  return Geodesic(alpha, beta);
}

/// Unit-speed point on g; t = 0 is the point closest to the origin and
/// t -> +inf tends to beta.
inline DiskPoint geodesic_point(const Geodesic& g, double t, MetricConvention m) {
  double r = std::tanh(t / m.length_factor());
  // far out along the geodesic tanh rounds to +-1
  constexpr double edge = 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
  r = std::clamp(r, -edge, edge);
  cplx on_diameter = r * g.direction();
  return mobius_apply(g.frame(), DiskPoint(on_diameter));
}

/// Image of a geodesic under an automorphism.
inline Geodesic mobius_apply(const MoebiusMap& g, const Geodesic& geo) {
  auto img = [&](BoundaryPoint p) { return BoundaryPoint(std::arg(g.apply(p.b()))); };
  return Geodesic(img(geo.alpha()), img(geo.beta()));
}

}  // namespace hyperdisk
