#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "hyperdisk/abel.hpp"
#include "hyperdisk/quadrature.hpp"

using namespace hyperdisk;

namespace {

const double sqrt_pi = std::sqrt(pi);

// Adaptive Simpson, used only as a reference integrator.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 40) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int level) {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = f(lm), frm = f(rm);
        double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (level <= 0 || std::abs(left + right - whole) < 15 * tol)
          return left + right + (left + right - whole) / 15;
        return rec(lo, mid, flo, flm, fmid, left, level - 1) + rec(mid, hi, fmid, frm, fhi, right, level - 1);
      };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), depth);
}

std::vector<double> uniform(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

RadialProfile gaussian_profile() {
  return RadialProfile::sample([](double q) { return std::exp(-q * q); }, 0.0, 6.0, 601, Parity::even);
}

double max_rel_error(const RadialProfile& got, const std::function<double(double)>& want) {
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    err = std::max(err, std::abs(got.values()[i] - want(got.grid()[i])));
    scale = std::max(scale, std::abs(want(got.grid()[i])));
  }
  return err / scale;
}

// Fifth-order central difference of order k in s with step h.
double central_derivative(const std::function<double(double)>& g, double s, int k, double h) {
  switch (k) {
    case 1: return (g(s - 2 * h) - 8 * g(s - h) + 8 * g(s + h) - g(s + 2 * h)) / (12 * h);
    case 2: return (-g(s - 2 * h) + 16 * g(s - h) - 30 * g(s) + 16 * g(s + h) - g(s + 2 * h)) / (12 * h * h);
    case 3:
      return (g(s - 3 * h) - 8 * g(s - 2 * h) + 13 * g(s - h) - 13 * g(s + h) + 8 * g(s + 2 * h) - g(s + 3 * h)) /
             (8 * h * h * h);
  }
  return NAN;
}

}  // namespace

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n : {1, 2, 5, 16, 48}) {
    const auto& rule = gauss_legendre(n);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-13);
    for (int k = 0; k <= 2 * n - 1; k += 2) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += rule.weights[i] * std::pow(rule.nodes[i], k);
      EXPECT_NEAR(q, 2.0 / (k + 1), 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(DiskQuadrature, RejectsSupportAtBoundary) {
  EXPECT_THROW(DiskQuadrature(8, 8, 1.0), std::invalid_argument);
  try {
    DiskQuadrature(8, 8, 1.2);
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "support must be compactly inside disk");
  }
}

TEST(DiskQuadrature, WeightsPositiveAndNodesInside) {
  DiskQuadrature q(24, 32, 0.9);
  for (double w : q.weights()) EXPECT_GT(w, 0.0);
  for (auto z : q.nodes()) EXPECT_LE(z.modulus(), 0.9 + 1e-15);
}

TEST(DiskIntegrate, InvariantArea) {
  DiskQuadrature q(48, 64, 0.5);
  EXPECT_NEAR(disk_integrate([](DiskPoint) { return 1.0; }, q), pi / 3, 1e-10);
  EXPECT_NEAR(disk_integrate([](DiskPoint) { return 1.0; }, DiskQuadrature(48, 8, 0.95)),
              invariant_disk_area(0.95), 1e-9 * invariant_disk_area(0.95));
  EXPECT_EQ(disk_integrate([](DiskPoint) { return 0.0; }, q), 0.0);
  EXPECT_NEAR(disk_integrate([](DiskPoint z) { return z.x() * std::exp(z.y() * z.y()); }, q), 0.0, 1e-12);
}

TEST(DiskIntegrate, ConvergesRapidlyForSmoothIntegrand) {
  auto f = [](DiskPoint z) { return std::exp(z.x()) * std::cos(2 * z.y()); };
  const double ref = disk_integrate(f, DiskQuadrature(128, 256, 0.7));
  double prev = std::abs(disk_integrate(f, DiskQuadrature(2, 4, 0.7)) - ref);
  for (int n : {4, 8}) {
    double err = std::abs(disk_integrate(f, DiskQuadrature(n, 2 * n, 0.7)) - ref);
    if (prev > 1e-12) EXPECT_GT(prev / std::max(err, 1e-300), 10.0) << "n=" << n;
    prev = err;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(BoundaryIntegrate, ConstantsAndCharacters) {
  BoundaryQuadrature q(16);
  EXPECT_NEAR(boundary_integrate([](BoundaryPoint) { return 1.0; }, q), 1.0, 1e-15);
  for (int k : {1, 3, -5, 15}) {
    cplx v = boundary_integrate([&](BoundaryPoint b) { return std::polar(1.0, k * b.theta()); }, q);
    EXPECT_NEAR(std::abs(v), 0.0, 1e-14) << k;
  }
}

TEST(BoundaryIntegrate, PoissonKernelIntegratesToOne) {
  DiskPoint z(0.4, 0.0);
  auto kernel = [&](BoundaryPoint b) { return std::exp(2 * horocycle_bracket(z, b, MetricConvention::unit())); };
  double dense = boundary_integrate(kernel, BoundaryQuadrature(4096));
  EXPECT_NEAR(dense, 1.0, 1e-14);
  for (int n : {64, 128}) EXPECT_NEAR(boundary_integrate(kernel, BoundaryQuadrature(n)), 1.0, 1e-10);
}

TEST(AbelForward, GaussianPairs) {
  auto gauss = [](double q) { return std::exp(-q * q); };
  auto grid = uniform(0.0, 4.0, 41);
  // d = 1: 2 * (sqrt(pi)/2) e^{-p^2};  d = 2: pi e^{-p^2};  d = 3: 4 pi (sqrt(pi)/4) e^{-p^2}
  const double amp[] = {sqrt_pi, pi, pi * sqrt_pi};
  for (int d = 1; d <= 3; ++d) {
    RadialProfile fh = abel_forward(gauss, grid, 7.0, d);
    for (std::size_t i = 0; i < grid.size(); ++i)
      EXPECT_NEAR(fh.values()[i], amp[d - 1] * gauss(grid[i]), 1e-8) << "d=" << d << " p=" << grid[i];
  }
}

TEST(AbelForward, ZeroAndUnsupported) {
  RadialProfile zero = RadialProfile::sample([](double) { return 0.0; }, 0.0, 3.0, 64, Parity::even);
  {
    RadialProfile out = abel_forward(zero, 2);
    for (double v : out.values()) EXPECT_EQ(v, 0.0);
  }
  EXPECT_THROW(abel_forward(zero, 4), std::invalid_argument);
  EXPECT_THROW(abel_inverse(zero, 0), std::invalid_argument);
}

TEST(AbelForward, SampledProfileMatchesCallable) {
  RadialProfile f = gaussian_profile();
  RadialProfile fh = abel_forward(f, 1);
  EXPECT_LT(max_rel_error(fh, [](double p) { return sqrt_pi * std::exp(-p * p); }), 1e-8);
}

TEST(AbelInverse, GaussianInverseD1) {
  RadialProfile fh =
      RadialProfile::sample([](double p) { return sqrt_pi * std::exp(-p * p); }, 0.0, 6.0, 601, Parity::even);
  RadialProfile f = abel_inverse(fh, 1);
  EXPECT_LT(max_rel_error(f, [](double r) { return std::exp(-r * r); }), 1e-6);
  RadialProfile zero = RadialProfile::sample([](double) { return 0.0; }, 0.0, 3.0, 64, Parity::even);
  {
    RadialProfile out = abel_inverse(zero, 1);
    for (double v : out.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(AbelInverse, RoundTripsAllDimensions) {
  std::vector<std::function<double(double)>> profiles = {
      [](double q) { return std::exp(-q * q); },
      [](double q) { return (1 + q * q) * std::exp(-1.5 * q * q); },
  };
  for (auto& fn : profiles) {
    RadialProfile f = RadialProfile::sample(fn, 0.0, 6.0, 601, Parity::even);
    for (int d = 1; d <= 3; ++d) {
      RadialProfile back = abel_inverse(abel_forward(f, d), d);
      EXPECT_LT(max_rel_error(back, fn), 1e-5) << "d=" << d;
    }
  }
}

TEST(AbelInverse, CoarseProfileRejected) {
  RadialProfile coarse = RadialProfile::sample([](double q) { return std::exp(-q * q); }, 0.0, 3.0, 20, Parity::even);
  try {
    abel_inverse(coarse, 2);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("need at least 32 samples"), std::string::npos) << e.what();
  }
}

// c(d) from first principles: apply (d/ds)^d, s = r^2, to
// I(s) = int_r^inf p (p^2 - s)^{d/2-1} Fhat(p) dp for the Gaussian pair, by
// quadrature plus finite differences, and solve F(r) = c I^{(d)}(s).
TEST(AbelInverse, CalibratedConstantsMatchGaussianOracle) {
  const double amp[] = {sqrt_pi, pi, pi * sqrt_pi};
  for (int d = 1; d <= 3; ++d) {
    auto integral = [&](double s) {
      // p = sqrt(s + u^2): p dp = u du, (p^2-s)^{d/2-1} = u^{d-2}
      return adaptive_simpson(
          [&](double u) { return std::pow(u, d - 1) * amp[d - 1] * std::exp(-s - u * u); }, 0.0, 9.0, 1e-14);
    };
    const double s0 = 0.5;
    double deriv = central_derivative(integral, s0, d, 0.02);
    double calibrated = std::exp(-s0) / deriv;
    EXPECT_NEAR(calibrated, abel_constant(d), 1e-6) << "d=" << d;
  }
  EXPECT_NEAR(abel_constant(1), -2.0 / pi, 1e-15);
}

TEST(AbelHypForward, ExponentialMatchesBesselAndQuadrature) {
  const double a = 1.3;
  auto f = [&](double t) { return std::exp(-a * t); };
  auto grid = uniform(1.0, 4.0, 13);
  RadialProfile fh = abel_hyp_forward(f, grid, 40.0, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid[i];
    // s = cosh v removes the endpoint singularity of (s^2-1)^{-1/2}
    double ref = 2 * adaptive_simpson([&](double v) { return f(t * std::cosh(v)); }, 0.0, 6.0, 1e-13);
    EXPECT_NEAR(fh.values()[i], ref, 1e-8) << t;
    EXPECT_NEAR(fh.values()[i], 2 * std::cyl_bessel_k(0.0, a * t), 1e-8) << t;
  }
  {
    RadialProfile out = abel_hyp_forward([](double) { return 0.0; }, grid, 10.0, 2);
    for (double v : out.values()) EXPECT_EQ(v, 0.0);
  }
  EXPECT_THROW(abel_hyp_forward(f, grid, 40.0, 3), std::invalid_argument);
}

TEST(AbelHypForward, ReducesToEuclideanFormUnderSubstitution) {
  // t^{d-1} Fhat_hyp(t) is the Euclidean transform of u -> F(u)/u.
  auto f = [](double u) { return std::exp(-(u - 1) * (u - 1)); };
  auto grid = uniform(1.0, 5.0, 41);
  for (int d = 1; d <= 2; ++d) {
    RadialProfile hyp = abel_hyp_forward(f, grid, 9.0, d);
    RadialProfile euc = abel_forward([&](double u) { return u >= 1.0 ? f(u) / u : 0.0; }, grid, 9.0, d);
    for (std::size_t i = 0; i < grid.size(); ++i)
      EXPECT_NEAR(std::pow(grid[i], d - 1) * hyp.values()[i], euc.values()[i], 1e-10);
  }
}

TEST(AbelHypInverse, RoundTrip) {
  auto f = [](double t) { return std::exp(-2 * t); };
  RadialProfile prof = RadialProfile::sample(f, 1.0, 21.0, 2001);
  for (int d = 1; d <= 2; ++d) {
    RadialProfile back = abel_hyp_inverse(abel_hyp_forward(prof, d), d);
    EXPECT_LT(max_rel_error(back, f), 1e-5) << "d=" << d;
  }
  RadialProfile zero = RadialProfile::sample([](double) { return 0.0; }, 1.0, 5.0, 200);
  {
    RadialProfile out = abel_hyp_inverse(zero, 1);
    for (double v : out.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(AbelHypInverse, EvaluationAtOneMatchesClosedManipulation) {
  const double a = 1.3;
  RadialProfile fh = abel_hyp_forward([&](double t) { return std::exp(-a * t); },
                                      uniform(1.0, 31.0, 3001), 31.0, 1);
  double at_one = abel_hyp_inverse(fh, 1).values().front();
  // (c(1)/2) int_1^inf (t^2-1)^{-1/2} Fhat'(t) dt with t = cosh p and Fhat = 2 K0(a t)
  double manip = 0.5 * abel_constant(1) *
                 adaptive_simpson([&](double p) { return -2 * a * std::cyl_bessel_k(1.0, a * std::cosh(p)); },
                                  0.0, 6.0, 1e-13);
  EXPECT_NEAR(at_one, manip, 1e-6);
  EXPECT_NEAR(at_one, std::exp(-a), 1e-6);
}
