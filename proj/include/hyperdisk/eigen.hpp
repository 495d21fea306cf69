#pragma once

// Laplacians on the disk (unit convention) and the plane, and eigenfunctions
// built as Poisson transforms of finite atomic plus smooth boundary data.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "fourier.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "quadrature.hpp"

namespace hyperdisk {

/// (1 - |z|^2)^2 times the five-point Euclidean Laplacian of f at z.
template <class F>
auto hyperbolic_laplacian(F&& f, DiskPoint z, double h = 1e-3) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (1.0 - z.modulus() <= 2.0 * h) throw std::invalid_argument("Laplacian stencil leaves the disk");
  const cplx c = z.z();
  auto at = [&](cplx w) { return f(DiskPoint(w)); };
  auto lap = (at(c + h) + at(c - h) + at(c + cplx(0.0, h)) + at(c - cplx(0.0, h)) - 4.0 * at(c)) / (h * h);
  const double s = z.conformal_gap();
  return s * s * lap;
}

/// Richardson combination (4 L(h/2) - L(h)) / 3, fourth order.
template <class F>
auto hyperbolic_laplacian_richardson(F&& f, DiskPoint z, double h = 1e-3) {
  auto coarse = hyperbolic_laplacian(f, z, h);
  auto fine = hyperbolic_laplacian(f, z, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

template <class F>
auto euclidean_laplacian(F&& f, Point2 x, double h = 1e-3) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  return (f(Point2{x.x + h, x.y}) + f(Point2{x.x - h, x.y}) + f(Point2{x.x, x.y + h}) + f(Point2{x.x, x.y - h}) -
          4.0 * f(x)) /
         (h * h);
}

/// Boundary functional sum_k w_k delta_{b_k} + density(b) db.
struct AnalyticFunctional {
  std::vector<std::pair<BoundaryPoint, cplx>> atoms;
  std::function<cplx(BoundaryPoint)> density;

  AnalyticFunctional& add_atom(BoundaryPoint b, cplx w) {
    atoms.emplace_back(b, w);
    return *this;
  }
};

/// int_B e^{mu <z,b>} dT(b); an eigenfunction of the Laplacian with
/// eigenvalue mu (mu - 2), i.e. -(lambda^2 + 1) for mu = i lambda + 1.
inline cplx eigenfunction_from_functional(const AnalyticFunctional& T, cplx mu, DiskPoint z,
                                          const BoundaryQuadrature& bquad) {
  cplx sum = 0.0;
  for (const auto& [b, w] : T.atoms) sum += w * disk_exponential(mu, z, b);
  if (T.density)
    sum += boundary_integrate([&](BoundaryPoint b) { return disk_exponential(mu, z, b) * T.density(b); }, bquad);
  return sum;
}

/// mu(mu - 2) = -(lambda^2 + 1) for mu = i lambda + 1.
inline cplx laplacian_eigenvalue(cplx mu) { return mu * (mu - 2.0); }

struct ScanSample {
  cplx z;
  double residual;
};

struct ScanOptions {
  double h = 1e-3;
  int n_side = 12;
  double floor = 1e-12;
  bool richardson = false;
};

/// Relative residuals |L u + ev u| / max(|u|, floor) on the square lattice of
/// spacing region/n_side clipped to |z| <= region.
template <class U>
std::vector<ScanSample> eigen_residual_samples(U&& u, cplx expected_eigenvalue, double region,
                                               const ScanOptions& opt = {}) {
  if (!(region >= 0.0) || region + 2.0 * opt.h >= 1.0)
    throw std::invalid_argument("scan region too close to the boundary");
  std::vector<ScanSample> out;
  const int n = std::max(1, opt.n_side);
  const double step = region / n;
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i) {
      cplx z(i * step, j * step);
      if (std::abs(z) > region * (1.0 + 1e-12)) continue;
      DiskPoint p(z);
      auto lu = opt.richardson ? hyperbolic_laplacian_richardson(u, p, opt.h) : hyperbolic_laplacian(u, p, opt.h);
      auto v = u(p);
      out.push_back({z, std::abs(lu + expected_eigenvalue * v) / std::max(std::abs(v), opt.floor)});
    }
  return out;
}

template <class U>
double eigen_residual_scan(U&& u, cplx expected_eigenvalue, double region, const ScanOptions& opt) {
  double m = 0.0;
  for (const auto& s : eigen_residual_samples(u, expected_eigenvalue, region, opt)) m = std::max(m, s.residual);
  return m;
}

template <class U>
double eigen_residual_scan(U&& u, cplx expected_eigenvalue, double region, double h = 1e-3) {
  ScanOptions opt;
  opt.h = h;
  return eigen_residual_scan(u, expected_eigenvalue, region, opt);
}

}  // namespace hyperdisk
