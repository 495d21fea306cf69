#pragma once

// Fourier analysis on the disk in the unit convention: the transform
// f~(lambda, b) = int f(z) e^{(-i lambda + 1)<z,b>} dz, its inversion with the
// density lambda th(pi lambda / 2) / (4 pi), spherical functions and Poisson
// transforms.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace hyperdisk {

struct SpectralParam {
  cplx lambda;
  SpectralParam(double l) : lambda(l) {}  // NOLINT(google-explicit-constructor)
  SpectralParam(cplx l) : lambda(l) {}    // NOLINT(google-explicit-constructor)
};

/// e^{mu <z,b>} in the unit convention.
inline cplx disk_exponential(cplx mu, DiskPoint z, BoundaryPoint b) {
  return std::exp(mu * horocycle_bracket(z, b, MetricConvention::unit()));
}

/// Compactly supported inputs for transform round trips. Every kind is
/// supported in a hyperbolic ball (unit convention) about support_center().
class TestFunction {
 public:
  enum class Kind { radial_bump, mobius_translated_bump, gaussian_in_distance };

  /// (1 - (|z|/r0)^2)^4 on |z| < r0.
  static TestFunction radial_bump(double r0, double amplitude = 1.0) {
    check_radius(r0);
    TestFunction f(Kind::radial_bump, amplitude);
    f.r0_ = r0;
    return f;
  }
  /// The radial bump composed with the inverse of the translation 0 -> c.
  static TestFunction mobius_translated_bump(DiskPoint c, double r0, double amplitude = 1.0) {
    check_radius(r0);
    TestFunction f(Kind::mobius_translated_bump, amplitude);
    f.r0_ = r0;
    f.center_ = c;
    f.to_origin_ = MoebiusMap::translation_from_origin(c).inverse();
    return f;
  }
  /// exp(-(d(0,z)/w)^2), cut to zero at d(0,z) = 6w.
  static TestFunction gaussian_in_distance(double width, double amplitude = 1.0) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    TestFunction f(Kind::gaussian_in_distance, amplitude);
    f.width_ = width;
    f.r0_ = std::tanh(6.0 * width);
    return f;
  }

  double operator()(DiskPoint z) const {
    if (amplitude_ == 0.0) return 0.0;
    switch (kind_) {
      case Kind::radial_bump:
        return amplitude_ * bump(z.modulus());
      case Kind::mobius_translated_bump:
        return amplitude_ * bump(std::abs(to_origin_.apply(z.z())));
      case Kind::gaussian_in_distance: {
        double d = std::atanh(z.modulus());
        if (d >= 6.0 * width_) return 0.0;
        return amplitude_ * std::exp(-(d / width_) * (d / width_));
      }
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double r0() const { return r0_; }
  double width() const { return width_; }
  DiskPoint support_center() const { return center_; }
  /// Hyperbolic support radius about support_center(), unit convention.
  double support_distance() const { return std::atanh(r0_); }
  /// Euclidean radius of the smallest origin-centred disk containing the support.
  double support_radius() const {
    return std::tanh(std::atanh(center_.modulus()) + support_distance());
  }

 private:
  TestFunction(Kind k, double amplitude) : kind_(k), amplitude_(amplitude) {}

  static void check_radius(double r0) {
    if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("support radius r0 must lie in (0, 1)");
  }
  double bump(double r) const {
    double x = r / r0_;
    if (x >= 1.0) return 0.0;
    double s = 1.0 - x * x;
    return s * s * s * s;
  }

  Kind kind_;
  double amplitude_ = 1.0;
  double r0_ = 0.5;
  double width_ = 0.0;
  DiskPoint center_;
  MoebiusMap to_origin_;
};

inline const char* to_string(TestFunction::Kind k) {
  switch (k) {
    case TestFunction::Kind::radial_bump: return "radial-bump";
    case TestFunction::Kind::mobius_translated_bump: return "mobius-translated-bump";
    case TestFunction::Kind::gaussian_in_distance: return "gaussian-in-distance";
  }
  return "?";
}

/// Quadrature centred on the support of f.
inline DiskQuadrature quadrature_for(const TestFunction& f, int n_r = 48, int n_theta = 96) {
  DiskQuadrature q(n_r, n_theta, f.r0());
  if (f.kind() == TestFunction::Kind::mobius_translated_bump) return q.centered_at(f.support_center());
  return q;
}

struct SpectralGrid {
  double lambda_max = 20.0;
  double dlambda = 0.05;
  int n_boundary = 64;
};

/// Samples f~(lambda_i, b_j) on a symmetric real lambda grid and N uniform
/// boundary angles, stored row-major by lambda.
class SpectralData {
 public:
  SpectralData() = default;
  SpectralData(std::vector<double> lambdas, int n_boundary, std::vector<cplx> values)
      : lambdas_(std::move(lambdas)), bquad_(n_boundary), values_(std::move(values)) {
    if (values_.size() != lambdas_.size() * static_cast<std::size_t>(n_boundary))
      throw std::invalid_argument("SpectralData value count does not match the grid");
    const std::size_t n = lambdas_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(lambdas_[i] + lambdas_[n - 1 - i]) > 1e-9 * (1.0 + std::abs(lambdas_[i])))
        throw std::invalid_argument("lambda grid must be symmetric about 0");
      if (i > 0 && !(lambdas_[i] > lambdas_[i - 1]))
        throw std::invalid_argument("lambda grid must be increasing");
    }
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("SpectralData values must be finite");
  }

  /// -Lambda, -Lambda + dl, ..., Lambda with Lambda rounded to a multiple of dl.
  static std::vector<double> symmetric_grid(double lambda_max, double dlambda) {
    if (!(lambda_max > 0.0 && dlambda > 0.0)) throw std::invalid_argument("lambda grid parameters must be positive");
    long m = std::lround(lambda_max / dlambda);
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(2 * m + 1));
    for (long i = -m; i <= m; ++i) g.push_back(static_cast<double>(i) * dlambda);
    return g;
  }

  template <class Fn>
  static SpectralData from_function(std::vector<double> lambdas, int n_boundary, Fn&& fn) {
    BoundaryQuadrature bq(n_boundary);
    std::vector<cplx> v;
    v.reserve(lambdas.size() * static_cast<std::size_t>(n_boundary));
    for (double l : lambdas)
      for (const auto& b : bq.nodes()) v.push_back(cplx(fn(l, b)));
    return SpectralData(std::move(lambdas), n_boundary, std::move(v));
  }

  const std::vector<double>& lambdas() const { return lambdas_; }
  std::size_t n_lambda() const { return lambdas_.size(); }
  int n_boundary() const { return bquad_.size(); }
  const BoundaryQuadrature& boundary() const { return bquad_; }
  double dlambda() const { return lambdas_.size() > 1 ? lambdas_[1] - lambdas_[0] : 0.0; }
  double lambda_max() const { return lambdas_.empty() ? 0.0 : lambdas_.back(); }
  cplx operator()(std::size_t i, std::size_t j) const { return values_[i * bquad_.size() + j]; }
  const std::vector<cplx>& values() const { return values_; }

  /// Row of lam; throws when lam is not a grid value.
  std::size_t index_of(double lam) const {
    double dl = dlambda();
    for (std::size_t i = 0; i < lambdas_.size(); ++i)
      if (std::abs(lambdas_[i] - lam) <= 1e-9 * std::max(1.0, dl)) return i;
    throw std::invalid_argument("lambda " + std::to_string(lam) + " is not on the spectral grid");
  }

 private:
  std::vector<double> lambdas_;
  BoundaryQuadrature bquad_{1};
  std::vector<cplx> values_;
};

namespace detail {

inline void check_support(const TestFunction& f, const DiskQuadrature& quad) {
  if (f.amplitude() == 0.0) return;
  if (!quad.covers(f.support_center(), f.support_distance(), 1e-9))
    throw std::invalid_argument("test function support exceeds the quadrature cutoff");
}

}  // namespace detail

inline cplx fourier_forward(const TestFunction& f, SpectralParam lam, BoundaryPoint b,
                            const DiskQuadrature& quad) {
  detail::check_support(f, quad);
  const cplx mu(1.0 + lam.lambda.imag(), -lam.lambda.real());
  const auto& z = quad.nodes();
  const auto& w = quad.weights();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double v = f(z[i]);
    if (v != 0.0) sum += w[i] * v * disk_exponential(mu, z[i], b);
  }
  return sum;
}

/// The transform on a full spectral grid. Rows are independent and computed
/// in parallel; the result does not depend on the thread count.
inline SpectralData fourier_forward(const TestFunction& f, const SpectralGrid& grid,
                                    const DiskQuadrature& quad, unsigned threads = 1) {
  detail::check_support(f, quad);
  auto lambdas = SpectralData::symmetric_grid(grid.lambda_max, grid.dlambda);
  BoundaryQuadrature bq(grid.n_boundary);
  const std::size_t nl = lambdas.size(), nb = bq.nodes().size();
  std::vector<cplx> values(nl * nb);

  // weighted samples on the support only
  std::vector<DiskPoint> z;
  std::vector<double> fw;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    double v = f(quad.nodes()[i]);
    if (v != 0.0) {
      z.push_back(quad.nodes()[i]);
      fw.push_back(v * quad.weights()[i]);
    }
  }
  const double dl = lambdas.size() > 1 ? lambdas[1] - lambdas[0] : 0.0;
  parallel_for(nb, [&](std::size_t j) {
    const BoundaryPoint b = bq.nodes()[j];
    const std::size_t m = z.size();
    std::vector<double> br(m), re(m), im(m), sre(m), sim(m);
    for (std::size_t k = 0; k < m; ++k) {
      br[k] = horocycle_bracket(z[k], b, MetricConvention::unit());
      sre[k] = std::cos(dl * br[k]);
      sim[k] = -std::sin(dl * br[k]);
    }
    // e^{-i lambda <z,b>} advanced row by row, re-seeded every 32 rows
    for (std::size_t i = 0; i < nl; ++i) {
      if (i % 32 == 0) {
        for (std::size_t k = 0; k < m; ++k) {
          double a = fw[k] * std::exp(br[k]), ph = lambdas[i] * br[k];
          re[k] = a * std::cos(ph);
          im[k] = -a * std::sin(ph);
        }
      } else {
        for (std::size_t k = 0; k < m; ++k) {
          double r = re[k] * sre[k] - im[k] * sim[k];
          im[k] = re[k] * sim[k] + im[k] * sre[k];
          re[k] = r;
        }
      }
      double sr = 0.0, si = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        sr += re[k];
        si += im[k];
      }
      values[i * nb + j] = cplx(sr, si);
    }
  }, threads);
  return SpectralData(std::move(lambdas), grid.n_boundary, std::move(values));
}

inline cplx poisson_transform(const std::function<cplx(BoundaryPoint)>& F, SpectralParam lam, DiskPoint z,
                              const BoundaryQuadrature& bquad) {
  const cplx mu = cplx(0.0, 1.0) * lam.lambda + 1.0;
  return boundary_integrate([&](BoundaryPoint b) { return disk_exponential(mu, z, b) * F(b); }, bquad);
}

inline cplx spherical_function(SpectralParam lam, DiskPoint z, const BoundaryQuadrature& bquad) {
  const cplx mu = cplx(0.0, 1.0) * lam.lambda + 1.0;
  return boundary_integrate([&](BoundaryPoint b) { return disk_exponential(mu, z, b); }, bquad);
}

/// lambda th(pi lambda / 2) / (4 pi).
inline double inversion_density(double lam) { return lam * std::tanh(pi * lam / 2.0) / (4.0 * pi); }

namespace detail {

inline double trapezoid_weight(const SpectralData& sd, std::size_t i) {
  double w = sd.dlambda();
  return (i == 0 || i + 1 == sd.n_lambda()) ? 0.5 * w : w;
}

inline void log_truncation(const SpectralData& sd) {
  if (!debug_logging() || sd.n_lambda() == 0) return;
  double edge = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < sd.n_lambda(); ++i)
    for (int j = 0; j < sd.n_boundary(); ++j) {
      double a = std::abs(sd(i, j)) * std::abs(inversion_density(sd.lambdas()[i]));
      peak = std::max(peak, a);
      if (i == 0 || i + 1 == sd.n_lambda()) edge = std::max(edge, a);
    }
  log_debug("spectral truncation: |f~| density at Lambda=", sd.lambda_max(), " is ", edge, " (peak ", peak, ")");
}

}  // namespace detail

inline cplx fourier_inverse(const SpectralData& sd, DiskPoint z) {
  detail::log_truncation(sd);
  const auto& bn = sd.boundary().nodes();
  const std::size_t nb = bn.size();
  std::vector<double> br(nb), amp(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    br[j] = horocycle_bracket(z, bn[j], MetricConvention::unit());
    amp[j] = std::exp(br[j]);
  }
  cplx sum = 0.0;
  for (std::size_t i = 0; i < sd.n_lambda(); ++i) {
    const double l = sd.lambdas()[i];
    const double wl = detail::trapezoid_weight(sd, i) * inversion_density(l);
    if (wl == 0.0) continue;
    cplx row = 0.0;
    for (std::size_t j = 0; j < nb; ++j) row += sd(i, j) * amp[j] * std::polar(1.0, l * br[j]);
    sum += wl * row;
  }
  return sum * sd.boundary().weight();
}

/// Relative gap between the disk L2 norm of f and the spectral norm
/// int_0^Lambda int_B |f~|^2 (lambda / 2 pi) th(pi lambda / 2) dlambda db.
inline double plancherel_defect(const TestFunction& f, const SpectralData& sd, const DiskQuadrature& quad) {
  detail::check_support(f, quad);
  double norm = disk_integrate([&](DiskPoint z) { double v = f(z); return v * v; }, quad);
  double spec = 0.0;
  for (std::size_t i = 0; i < sd.n_lambda(); ++i) {
    const double l = sd.lambdas()[i];
    double row = 0.0;
    for (int j = 0; j < sd.n_boundary(); ++j) row += std::norm(sd(i, j));
    // half of the symmetric grid stands for [0, Lambda]
    spec += 0.5 * detail::trapezoid_weight(sd, i) * l * std::tanh(pi * l / 2.0) / two_pi * row;
  }
  spec *= sd.boundary().weight();
  if (norm == 0.0) return std::abs(spec);
  return std::abs(norm - spec) / norm;
}

/// |int_B f~(lam,b) e^{(i lam+1)<z,b>} db - int_B f~(-lam,b) e^{(-i lam+1)<z,b>} db|.
inline double functional_equation_residual(const SpectralData& sd, double lam, DiskPoint z) {
  const std::size_t ip = sd.index_of(lam), im = sd.index_of(-lam);
  const auto& bn = sd.boundary().nodes();
  cplx lhs = 0.0, rhs = 0.0;
  for (std::size_t j = 0; j < bn.size(); ++j) {
    lhs += sd(ip, j) * disk_exponential(cplx(1.0, lam), z, bn[j]);
    rhs += sd(im, j) * disk_exponential(cplx(1.0, -lam), z, bn[j]);
  }
  return std::abs(lhs - rhs) * sd.boundary().weight();
}

/// prod_{j<|k|} ((x+1)/2 + j), the ratio Gamma((x+1)/2 + |k|) / Gamma((x+1)/2).
inline cplx coefficient_polynomial(int k, cplx x) {
  cplx p = 1.0;
  const cplx h = 0.5 * (x + 1.0);
  for (int j = 0; j < std::abs(k); ++j) p *= h + static_cast<double>(j);
  return p;
}

/// Discrete angular Fourier coefficient (1/N) sum_j f~(lambda_i, b_j) e^{-i k theta_j}.
inline cplx angular_coefficient(const SpectralData& sd, std::size_t i, int k) {
  cplx sum = 0.0;
  const auto& bn = sd.boundary().nodes();
  for (std::size_t j = 0; j < bn.size(); ++j) sum += sd(i, j) * std::polar(1.0, -k * bn[j].theta());
  return sum * sd.boundary().weight();
}

/// |phi_k(-lam) p_k(-i lam) - phi_k(lam) p_k(i lam)|.
inline double coefficient_condition_residual(const SpectralData& sd, double lam, int k) {
  if (2 * std::abs(k) >= sd.n_boundary())
    throw std::invalid_argument("coefficient index must satisfy |k| < N/2");
  const std::size_t ip = sd.index_of(lam), im = sd.index_of(-lam);
  const cplx i1(0.0, 1.0);
  cplx lhs = angular_coefficient(sd, im, k) * coefficient_polynomial(k, -i1 * lam);
  cplx rhs = angular_coefficient(sd, ip, k) * coefficient_polynomial(k, i1 * lam);
  return std::abs(lhs - rhs);
}

}  // namespace hyperdisk
