#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include <hyperdisk/eigen.hpp>

using namespace hyperdisk;

namespace {

auto exponential(double lam, BoundaryPoint b) {
  return [=](DiskPoint z) { return disk_exponential(cplx(1.0, lam), z, b); };
}

double relative_residual(cplx lu, cplx ev, cplx u) { return std::abs(lu + ev * u) / std::abs(u); }

}  // namespace

TEST(HyperbolicLaplacian, ConstantIsAnnihilated) {
  auto one = [](DiskPoint) { return 1.0; };
  for (cplx z : {cplx(0.0), cplx(0.3, -0.4), cplx(0.9, 0.0)})
    EXPECT_LT(std::abs(hyperbolic_laplacian(one, DiskPoint(z), 1e-3)), 1e-9);
}

TEST(HyperbolicLaplacian, QuadraticIsExact) {
  // (1-|z|^2)^2 * 4 for x^2 + y^2
  auto q = [](DiskPoint z) { return std::norm(z.z()); };
  DiskPoint z(0.3, 0.2);
  double s = 1.0 - 0.13;
  EXPECT_NEAR(hyperbolic_laplacian(q, z, 1e-2), 4.0 * s * s, 1e-10);
}

TEST(HyperbolicLaplacian, RejectsStencilOutsideDisk) {
  auto one = [](DiskPoint) { return 1.0; };
  EXPECT_THROW(hyperbolic_laplacian(one, DiskPoint(0.999, 0.0), 1e-3), std::invalid_argument);
  EXPECT_THROW(hyperbolic_laplacian(one, DiskPoint(0.0, 0.0), 0.0), std::invalid_argument);
  EXPECT_NO_THROW(hyperbolic_laplacian(one, DiskPoint(0.99, 0.0), 1e-3));
}

TEST(HyperbolicLaplacian, PoissonKernelIsHarmonic) {
  BoundaryPoint b(0.0);
  auto P = [&](DiskPoint z) { return std::exp(2.0 * horocycle_bracket(z, b, MetricConvention::unit())); };
  DiskPoint z(0.2, 0.3);
  EXPECT_LT(std::abs(hyperbolic_laplacian(P, z, 1e-3)) / P(z), 1e-5);
}

TEST(HyperbolicLaplacian, DiskExponentialEigenvalue) {
  const double lam = 1.3;
  for (double th : {0.0, 2.0, 4.1}) {
    auto e = exponential(lam, BoundaryPoint(th));
    for (cplx z : {cplx(0.2, 0.3), cplx(-0.5, 0.1), cplx(0.0)}) {
      DiskPoint p(z);
      EXPECT_LT(relative_residual(hyperbolic_laplacian(e, p, 1e-3), lam * lam + 1.0, e(p)), 1e-4);
    }
  }
}

TEST(HyperbolicLaplacian, BothSignsOfLambdaShareEigenvalue) {
  const double lam = 2.2;
  BoundaryPoint b(1.0);
  DiskPoint z(0.3, -0.2);
  for (double s : {1.0, -1.0}) {
    auto e = exponential(s * lam, b);
    EXPECT_LT(relative_residual(hyperbolic_laplacian(e, z, 1e-3), lam * lam + 1.0, e(z)), 1e-4);
  }
}

TEST(HyperbolicLaplacian, ResidualIsSecondOrderInStep) {
  auto e = exponential(1.3, BoundaryPoint(0.7));
  DiskPoint z(0.35, 0.25);
  double r[3];
  int k = 0;
  for (double h : {4e-3, 2e-3, 1e-3}) r[k++] = relative_residual(hyperbolic_laplacian(e, z, h), 1.0 + 1.69, e(z));
  EXPECT_NEAR(r[0] / r[1], 4.0, 0.2);
  EXPECT_NEAR(r[1] / r[2], 4.0, 0.2);
}

TEST(HyperbolicLaplacian, RichardsonIsMoreAccurate) {
  auto e = exponential(1.3, BoundaryPoint(0.7));
  DiskPoint z(0.35, 0.25);
  double plain = relative_residual(hyperbolic_laplacian(e, z, 4e-3), 2.69, e(z));
  double rich = relative_residual(hyperbolic_laplacian_richardson(e, z, 4e-3), 2.69, e(z));
  EXPECT_LT(rich, 0.05 * plain);
}

TEST(EuclideanLaplacian, BasicCases) {
  EXPECT_NEAR(euclidean_laplacian([](Point2) { return 1.0; }, Point2{0.4, -1.0}), 0.0, 1e-12);
  EXPECT_NEAR(euclidean_laplacian([](Point2 p) { return p.x * p.x; }, Point2{0.3, 2.0}, 1e-3), 2.0, 1e-9);
}

TEST(EuclideanLaplacian, PlaneWaveEigenfunction) {
  const double lam = 2.0;
  auto w = [&](Point2 p) { return std::polar(1.0, lam * p.x); };
  for (Point2 x : {Point2{0.0, 0.0}, Point2{0.7, -0.3}, Point2{-2.0, 1.5}})
    EXPECT_LT(relative_residual(euclidean_laplacian(w, x, 1e-3), lam * lam, w(x)), 1e-5);
  // oblique direction
  const double c = std::cos(0.6), s = std::sin(0.6);
  auto w2 = [&](Point2 p) { return std::polar(1.0, lam * (c * p.x + s * p.y)); };
  EXPECT_LT(relative_residual(euclidean_laplacian(w2, Point2{0.2, 0.9}, 1e-3), lam * lam, w2(Point2{0.2, 0.9})), 1e-5);
}

TEST(Eigenfunction, SingleAtomIsExponential) {
  BoundaryQuadrature bq(32);
  BoundaryPoint b(2.5);
  AnalyticFunctional T;
  T.add_atom(b, 1.0);
  const cplx mu(1.0, 0.8);
  DiskPoint z(-0.1, 0.45);
  EXPECT_LT(std::abs(eigenfunction_from_functional(T, mu, z, bq) - disk_exponential(mu, z, b)), 1e-15);
}

TEST(Eigenfunction, UniformDensityIsSphericalFunction) {
  BoundaryQuadrature bq(64);
  AnalyticFunctional T;
  T.density = [](BoundaryPoint) { return cplx(1.0); };
  for (double lam : {0.0, 0.9, 3.0}) {
    DiskPoint z(0.3, 0.2);
    EXPECT_LT(std::abs(eigenfunction_from_functional(T, cplx(1.0, lam), z, bq) - spherical_function(lam, z, bq)),
              1e-14);
  }
}

TEST(Eigenfunction, EigenvalueFormula) {
  EXPECT_LT(std::abs(laplacian_eigenvalue(cplx(1.0, 1.3)) + (1.69 + 1.0)), 1e-14);
  EXPECT_EQ(laplacian_eigenvalue(2.0), cplx(0.0));
}

TEST(Eigenfunction, TwoAtomsPassResidualScan) {
  const double lam = 0.9;
  BoundaryQuadrature bq(64);
  AnalyticFunctional T;
  T.add_atom(BoundaryPoint(0.3), 1.0).add_atom(BoundaryPoint(3.9), cplx(0.0, 0.5));
  auto u = [&](DiskPoint z) { return eigenfunction_from_functional(T, cplx(1.0, lam), z, bq); };
  EXPECT_LT(eigen_residual_scan(u, lam * lam + 1.0, 0.6, 1e-3), 1e-4);
}

TEST(Eigenfunction, AtomsPlusDensityPassResidualScan) {
  const double lam = 1.7;
  BoundaryQuadrature bq(128);
  AnalyticFunctional T;
  T.add_atom(BoundaryPoint(1.0), 2.0);
  T.density = [](BoundaryPoint b) { return cplx(std::cos(b.theta()), 0.2 * std::sin(2.0 * b.theta())); };
  auto u = [&](DiskPoint z) { return eigenfunction_from_functional(T, cplx(1.0, lam), z, bq); };
  EXPECT_LT(eigen_residual_scan(u, lam * lam + 1.0, 0.5, 1e-3), 1e-4);
}

TEST(Eigenfunction, LinearCombinationStaysBelowComponentResiduals) {
  const double lam = 1.3;
  auto e1 = exponential(lam, BoundaryPoint(0.2));
  auto e2 = exponential(lam, BoundaryPoint(2.9));
  auto sum = [&](DiskPoint z) { return 0.6 * e1(z) - 1.4 * e2(z); };
  double r1 = eigen_residual_scan(e1, lam * lam + 1.0, 0.5);
  double r2 = eigen_residual_scan(e2, lam * lam + 1.0, 0.5);
  double rs = eigen_residual_scan(sum, lam * lam + 1.0, 0.5);
  EXPECT_LT(rs, 1e-4);
  EXPECT_GT(r1, 0.0);
  // pointwise the combined residual is bounded by the weighted component residuals
  for (cplx z : {cplx(0.1, 0.1), cplx(-0.3, 0.2)}) {
    DiskPoint p(z);
    double ev = lam * lam + 1.0;
    double a = std::abs(hyperbolic_laplacian(e1, p) + ev * e1(p));
    double b = std::abs(hyperbolic_laplacian(e2, p) + ev * e2(p));
    double c = std::abs(hyperbolic_laplacian(sum, p) + ev * sum(p));
    EXPECT_LE(c, 0.6 * a + 1.4 * b + 1e-9);
  }
  (void)r2;
}

TEST(ResidualScan, SphericalFunction) {
  BoundaryQuadrature bq(64);
  auto phi = [&](DiskPoint z) { return spherical_function(1.0, z, bq); };
  EXPECT_LT(eigen_residual_scan(phi, 2.0, 0.6, 1e-3), 1e-4);
}

TEST(ResidualScan, ZeroFunctionUsesFloor) {
  auto zero = [](DiskPoint) { return 0.0; };
  EXPECT_EQ(eigen_residual_scan(zero, 3.0, 0.6, 1e-3), 0.0);
}

TEST(ResidualScan, PoissonKernelHarmonic) {
  BoundaryPoint b(5.0);
  auto P = [&](DiskPoint z) { return std::exp(2.0 * horocycle_bracket(z, b, MetricConvention::unit())); };
  ScanOptions opt;
  opt.richardson = true;
  EXPECT_LT(eigen_residual_scan(P, 0.0, 0.6, opt), 1e-5);
  // the plain stencil is limited by h^2 / |z - b|^3 near b
  EXPECT_LT(eigen_residual_scan(P, 0.0, 0.6, 1e-3), 1e-4);
}

TEST(ResidualScan, ConstantWithWrongEigenvalueFails) {
  auto one = [](DiskPoint) { return 1.0; };
  EXPECT_NEAR(eigen_residual_scan(one, 1.0, 0.6, 1e-3), 1.0, 1e-9);
}

TEST(ResidualScan, SamplesCoverRegionOnly) {
  auto one = [](DiskPoint) { return 1.0; };
  ScanOptions opt;
  opt.n_side = 4;
  auto s = eigen_residual_samples(one, 0.0, 0.5, opt);
  EXPECT_FALSE(s.empty());
  for (const auto& x : s) EXPECT_LE(std::abs(x.z), 0.5 + 1e-12);
  EXPECT_THROW(eigen_residual_samples(one, 0.0, 0.999), std::invalid_argument);
}

TEST(GridFunction, InterpolationReproducesPolynomials) {
  auto grid = ImageGrid::square(32, 1.0);
  auto lin = GridFunction::sample(grid, [](Point2 p) { return 2.0 * p.x - 3.0 * p.y + 0.5; });
  auto cub = GridFunction::sample(grid, [](Point2 p) { return p.x * p.x * p.y - p.y * p.y; });
  for (Point2 p : {Point2{0.013, -0.21}, Point2{0.5, 0.77}, Point2{-0.66, 0.1}}) {
    EXPECT_NEAR(lin.bilinear(p), 2.0 * p.x - 3.0 * p.y + 0.5, 1e-13);
    EXPECT_NEAR(lin.bicubic(p), 2.0 * p.x - 3.0 * p.y + 0.5, 1e-13);
    // Keys cubic convolution is exact for quadratics
    EXPECT_NEAR(cub.bicubic(p), p.x * p.x * p.y - p.y * p.y, 1e-12);
  }
}

TEST(GridFunction, NodesAndOutsideValues) {
  auto grid = ImageGrid::square(8, 2.0);
  EXPECT_DOUBLE_EQ(grid.dx(), 0.5);
  EXPECT_DOUBLE_EQ(grid.x(4), 0.0);
  auto f = GridFunction::sample(grid, [](Point2 p) { return p.x + 10.0 * p.y; });
  EXPECT_DOUBLE_EQ(f.at(4, 5), 5.0);
  EXPECT_DOUBLE_EQ(f(Point2{0.0, 0.5}), 5.0);
  EXPECT_EQ(f(Point2{5.0, 5.0}), 0.0);
  EXPECT_THROW(GridFunction(grid, std::vector<double>(3)), std::invalid_argument);
}
