#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperdisk/geometry.hpp"

using namespace hyperdisk;

namespace {

const MetricConvention kUnit = MetricConvention::unit();
const MetricConvention kCurv = MetricConvention::curvature_minus_one();

// Composite Simpson of ds along the radius [0, r]; independent of the closed form.
double radial_length_oracle(double r, double scale) {
  const int n = 20000;
  const double h = r / n;
  auto density = [&](double t) { return std::sqrt(scale) / (1.0 - t * t); };
  double s = density(0.0) + density(r);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * density(i * h);
  return s * h / 3.0;
}

DiskPoint random_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = rmax * std::sqrt(u(rng));
  double th = two_pi * u(rng);
  return DiskPoint(std::polar(r, th));
}

MoebiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DiskPoint c = random_point(rng, 0.6);
  return MoebiusMap::translation_from_origin(c).compose(MoebiusMap::rotation(two_pi * u(rng)));
}

}  // namespace

TEST(DiskPoint, RejectsBoundaryAndOutside) {
  EXPECT_THROW(DiskPoint(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(DiskPoint(0.8, 0.8), std::invalid_argument);
  EXPECT_NO_THROW(DiskPoint(0.999, 0.0));
}

TEST(BoundaryPoint, NormalizesAngle) {
  EXPECT_NEAR(BoundaryPoint(-pi / 2).theta(), 3 * pi / 2, 1e-15);
  EXPECT_NEAR(BoundaryPoint(5 * pi).theta(), pi, 1e-14);
}

TEST(MetricConvention, OnlyScalesOneAndFour) {
  EXPECT_EQ(MetricConvention::from_scale(4).scale(), 4);
  EXPECT_THROW(MetricConvention::from_scale(2), std::invalid_argument);
}

TEST(Moebius, IdentityFixesPoints) {
  DiskPoint z(0.3, 0.1);
  DiskPoint w = mobius_apply(MoebiusMap::identity(), z);
  EXPECT_EQ(w.z(), z.z());
}

TEST(Moebius, IdentityIsNeutralForComposition) {
  std::mt19937_64 rng(7);
  MoebiusMap g = random_map(rng);
  MoebiusMap e = MoebiusMap::identity();
  for (int i = 0; i < 20; ++i) {
    DiskPoint z = random_point(rng, 0.9);
    EXPECT_NEAR(std::abs(e.compose(g).apply(z.z()) - g.apply(z.z())), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g.compose(e).apply(z.z()) - g.apply(z.z())), 0.0, 1e-15);
  }
}

TEST(Moebius, PreservesDiskAndDeterminant) {
  std::mt19937_64 rng(11);
  MoebiusMap g = random_map(rng);
  for (int k = 0; k < 5; ++k) g = g.compose(random_map(rng));
  EXPECT_LT(g.determinant_defect(), 1e-12);
  for (int i = 0; i < 10000; ++i) {
    DiskPoint z = random_point(rng, 0.999);
    EXPECT_LT(std::abs(g.apply(z.z())), 1.0);
  }
}

TEST(Moebius, InverseUndoes) {
  std::mt19937_64 rng(3);
  MoebiusMap g = random_map(rng);
  DiskPoint z(0.2, -0.5);
  EXPECT_NEAR(std::abs(g.inverse().apply(g.apply(z.z())) - z.z()), 0.0, 1e-14);
}

TEST(TranslateToOrigin, SendsPointToZero) {
  DiskPoint a(0.5, 0.0);
  MoebiusMap g = translate_to_origin(a);
  EXPECT_NEAR(std::abs(g.apply(a.z())), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g.apply(0.0)), 0.5, 1e-14);
  // a = 0 gives a map fixing the origin
  EXPECT_NEAR(std::abs(translate_to_origin(DiskPoint()).apply(0.0)), 0.0, 1e-15);
}

TEST(Distance, ClosedFormsMatchArcLengthIntegral) {
  EXPECT_EQ(distance(DiskPoint(), DiskPoint(), kUnit), 0.0);
  DiskPoint o, h(0.5, 0.0);
  EXPECT_NEAR(distance(o, h, kUnit), radial_length_oracle(0.5, 1.0), 1e-10);
  EXPECT_NEAR(distance(o, h, kUnit), 0.5493061443340549, 1e-14);
  EXPECT_NEAR(distance(o, h, kCurv), radial_length_oracle(0.5, 4.0), 1e-10);
  EXPECT_NEAR(distance(o, h, kCurv), std::log(3.0), 1e-14);
}

TEST(Distance, SymmetricAndPositive) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    DiskPoint z = random_point(rng, 0.95), w = random_point(rng, 0.95);
    double d = distance(z, w, kUnit);
    EXPECT_GT(d, 0.0);
    EXPECT_NEAR(d, distance(w, z, kUnit), 1e-14 * (1 + d));
  }
}

TEST(Distance, MoebiusInvariantBothConventions) {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    MoebiusMap g = random_map(rng);
    DiskPoint z = random_point(rng, 0.8), w = random_point(rng, 0.8);
    for (auto m : {kUnit, kCurv}) {
      double d0 = distance(z, w, m);
      double d1 = distance(mobius_apply(g, z), mobius_apply(g, w), m);
      worst = std::max(worst, std::abs(d1 - d0));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(HorocycleBracket, OriginAndPoissonKernel) {
  for (double th : {0.0, 1.0, 4.0}) EXPECT_EQ(horocycle_bracket(DiskPoint(), BoundaryPoint(th), kUnit), 0.0);
  EXPECT_NEAR(horocycle_bracket(DiskPoint(0.5, 0.0), BoundaryPoint(0.0), kUnit), 0.5 * std::log(3.0), 1e-15);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int i = 0; i < 1000; ++i) {
    DiskPoint z = random_point(rng, 0.95);
    BoundaryPoint b(u(rng));
    double poisson = z.conformal_gap() / std::norm(z.z() - b.b());
    EXPECT_NEAR(std::exp(2 * horocycle_bracket(z, b, kUnit)) / poisson, 1.0, 1e-14);
    EXPECT_NEAR(horocycle_bracket(z, b, kCurv), 2 * horocycle_bracket(z, b, kUnit), 1e-13);
  }
}

TEST(HorocycleBracket, RadialPointEqualsDistance) {
  BoundaryPoint b(0.7);
  for (double r : {0.01, 0.3, 0.6, 0.9, 0.99}) {
    DiskPoint z(r * b.b());
    EXPECT_NEAR(horocycle_bracket(z, b, kUnit), distance(DiskPoint(), z, kUnit), 1e-13);
  }
}

TEST(Horocycle, LevelSetIsTangentCircle) {
  Horocycle h{BoundaryPoint(1.1), 0.4, kUnit};
  cplx c = h.euclidean_center();
  double rho = h.euclidean_radius();
  EXPECT_NEAR(std::abs(c) + rho, 1.0, 1e-15);
  for (double phi : {0.3, 1.5, 2.9, 4.0}) {
    DiskPoint z(c + std::polar(rho, phi));
    EXPECT_NEAR(horocycle_bracket(z, h.b, kUnit), h.s, 1e-12);
  }
}

TEST(Geodesic, DiameterAndQuarterArc) {
  Geodesic diam = geodesic_from_endpoints(BoundaryPoint(0.0), BoundaryPoint(pi));
  EXPECT_TRUE(diam.is_diameter());
  EXPECT_NEAR(std::abs(geodesic_point(diam, 0.0, kCurv).z()), 0.0, 1e-15);

  // circle through 1 and i orthogonal to |z| = 1: centre 1+i, radius 1
  Geodesic arc = geodesic_from_endpoints(BoundaryPoint(0.0), BoundaryPoint(pi / 2));
  EXPECT_FALSE(arc.is_diameter());
  EXPECT_NEAR(std::abs(arc.center() - cplx(1.0, 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(arc.radius(), 1.0, 1e-14);
}

TEST(Geodesic, CoincidentEndpointsRejected) {
  EXPECT_THROW(geodesic_from_endpoints(BoundaryPoint(1.0), BoundaryPoint(1.0 + two_pi)), std::invalid_argument);
}

TEST(Geodesic, OrthogonalityAndEndpointsOnCarrier) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int i = 0; i < 500; ++i) {
    BoundaryPoint a(u(rng)), b(u(rng));
    Geodesic g(a, b);
    if (g.is_diameter()) continue;
    cplx c = g.center();
    double rho = g.radius();
    EXPECT_NEAR(std::norm(c) - rho * rho, 1.0, 1e-12 * std::norm(c));
    EXPECT_NEAR(std::abs(a.b() - c), rho, 1e-14 * (1 + rho));
    EXPECT_NEAR(std::abs(b.b() - c), rho, 1e-14 * (1 + rho));
  }
}

TEST(Geodesic, NearlyAntipodalBecomesDiameter) {
  Geodesic g(BoundaryPoint(0.0), BoundaryPoint(pi + 1e-11));
  EXPECT_TRUE(g.is_diameter());
}

TEST(GeodesicPoint, DiameterParameterisation) {
  Geodesic diam(BoundaryPoint(pi), BoundaryPoint(0.0));
  for (double t : {-2.0, 0.5, 3.0}) {
    cplx p = geodesic_point(diam, t, kCurv).z();
    EXPECT_NEAR(p.real(), std::tanh(t / 2), 1e-15);
    EXPECT_NEAR(p.imag(), 0.0, 1e-15);
  }
}

TEST(GeodesicPoint, UnitSpeedAndEndpoints) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int i = 0; i < 50; ++i) {
    Geodesic g(BoundaryPoint(u(rng)), BoundaryPoint(u(rng)));
    for (auto m : {kUnit, kCurv}) {
      for (double t : {-1.5, 0.0, 0.7, 2.0}) {
        double h = 1e-3;
        double d = distance(geodesic_point(g, t, m), geodesic_point(g, t + h, m), m);
        EXPECT_LT(std::abs(d - h), 1e-8);
        double big = distance(geodesic_point(g, t, m), geodesic_point(g, t + 1.3, m), m);
        EXPECT_NEAR(big, 1.3, 1e-9);
      }
      EXPECT_NEAR(std::abs(geodesic_point(g, 30.0, m).z() - g.beta().b()), 0.0, 1e-6);
      EXPECT_NEAR(std::abs(geodesic_point(g, -30.0, m).z() - g.alpha().b()), 0.0, 1e-6);
      // t = 0 is the closest point to the origin
      double d0 = std::abs(geodesic_point(g, 0.0, m).z());
      EXPECT_LE(d0, std::abs(geodesic_point(g, 0.05, m).z()));
      EXPECT_LE(d0, std::abs(geodesic_point(g, -0.05, m).z()));
    }
  }
}

TEST(Geodesic, FromNormalHasRequestedDistance) {
  for (double s : {0.0, 0.3, 1.0, 2.5}) {
    Geodesic g = Geodesic::from_normal(1.2, s, kCurv);
    EXPECT_NEAR(g.distance_from_origin(kCurv), s, 1e-12);
    EXPECT_NEAR(distance(DiskPoint(), geodesic_point(g, 0.0, kCurv), kCurv), s, 1e-12);
    if (s > 0) EXPECT_NEAR(std::arg(geodesic_point(g, 0.0, kCurv).z()), 1.2, 1e-12);
  }
}

TEST(Geodesic, MoebiusImageKeepsGeodesic) {
  std::mt19937_64 rng(2);
  MoebiusMap g = random_map(rng);
  Geodesic geo = Geodesic::from_normal(0.4, 0.8, kCurv);
  Geodesic img = mobius_apply(g, geo);
  // images of points of geo lie on img: distance to img's carrier
  for (double t : {-1.0, 0.0, 2.0}) {
    cplx w = g.apply(geodesic_point(geo, t, kCurv).z());
    if (img.is_diameter()) continue;
    EXPECT_NEAR(std::abs(w - img.center()), img.radius(), 1e-10);
  }
}

TEST(CosineRule, RightTriangleOnGeodesic) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    Geodesic xi = Geodesic::from_normal(two_pi * u(rng), 2.0 * u(rng), kCurv);
    double p = 1.5 * u(rng) + 0.01;
    double r = 3.0 * (u(rng) - 0.5);
    // x0 = foot on xi; x at distance p along the normal through x0 (towards origin side)
    DiskPoint x0 = geodesic_point(xi, 0.0, kCurv);
    // normal geodesic through x0: the radial geodesic from the origin through x0
    MoebiusMap frame = xi.frame();
    cplx normal_dir = std::polar(1.0, xi.psi());
    DiskPoint x = mobius_apply(frame, DiskPoint(std::tanh(-p / 2) * normal_dir));
    EXPECT_NEAR(distance(x, x0, kCurv), p, 1e-10);
    DiskPoint y = geodesic_point(xi, r, kCurv);
    double lhs = std::cosh(distance(x, y, kCurv));
    double rhs = std::cosh(p) * std::cosh(r);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}
