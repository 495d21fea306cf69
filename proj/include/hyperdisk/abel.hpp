#pragma once

// Abel-type integral equations relating a radial profile F(q) to its averages
// over d-planes at distance p, in the Euclidean form
//   Fhat(p) = Omega_d * int_p^inf F(q) (q^2 - p^2)^{d/2-1} q dq
// and the hyperbolic form (profiles indexed by t = cosh p)
//   Fhat(t) = Omega_d * int_1^inf F(t s) (s^2 - 1)^{d/2-1} ds.
//
// Inversion follows F(r) = c(d) (d/d(r^2))^d int_r^inf p (p^2-r^2)^{d/2-1} Fhat(p) dp.
// After one integration by parts the integral is -(1/d) J_{d/2}(r) with
//   J_a(r) = int_r^inf (p^2 - r^2)^a Fhat'(p) dp,   d/d(r^2) J_a = -a J_{a-1}.
// The exponent is lowered analytically to -1/2 (d odd) or 0 (d even, where
// J_0 = -Fhat); the remaining d/d(r^2) steps are finite differences.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperdisk/diagnostics.hpp"
#include "hyperdisk/profile.hpp"
#include "hyperdisk/quadrature.hpp"

namespace hyperdisk {

/// Area of the unit sphere in R^d; the 0-sphere {-1, 1} counts 2.
inline double unit_sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    default: throw std::invalid_argument("unit_sphere_area: unsupported dimension " + std::to_string(d));
  }
}

/// c(d) in the Abel inversion. Values from calibrating the Gaussian pair
/// F = exp(-q^2), Fhat = Omega_d Gamma(d/2)/2 exp(-p^2); the round-trip tests
/// recompute them numerically.
inline double abel_constant(int d) {
  switch (d) {
    case 1: return -2.0 / pi;
    case 2: return 2.0 / pi;
    case 3: return -4.0 / (pi * pi);
    default: throw std::invalid_argument("abel_constant: unsupported d " + std::to_string(d));
  }
}

namespace detail {

inline void check_abel_dimension(int d, int max_d) {
  if (d < 1 || d > max_d)
    throw std::invalid_argument("unsupported Abel dimension d = " + std::to_string(d) +
                                " (supported 1.." + std::to_string(max_d) + ")");
}

inline int abel_panels(double length) { return std::max(4, static_cast<int>(std::ceil(length / 0.2))); }

/// Minimum number of samples needed before the d-fold differentiation is trusted.
inline std::size_t min_abel_samples(int d) { return static_cast<std::size_t>(16 + 8 * d); }

inline void check_density(const RadialProfile& p, int d) {
  std::size_t need = min_abel_samples(d);
  if (p.size() < need)
    throw std::invalid_argument("profile too coarse for " + std::to_string(d) +
                                "-fold differentiation: need at least " + std::to_string(need) +
                                " samples, got " + std::to_string(p.size()));
}

/// int_0^U G(sqrt(r^2+u^2)) u^{d-1} du, U = sqrt(cutoff^2 - r^2).
template <class G>
double radial_slice_integral(G&& g, double r, double cutoff, int d) {
  if (r >= cutoff) return 0.0;
  const double upper = std::sqrt(cutoff * cutoff - r * r);
  return integrate_gl(
      [&](double u) {
        double q = std::sqrt(r * r + u * u);
        return g(q) * std::pow(u, d - 1);
      },
      0.0, upper, abel_panels(upper));
}

/// J_{-1/2}(r) = int_r^inf Fhat'(p) / sqrt(p^2 - r^2) dp after p = sqrt(r^2 + u^2).
inline double half_order_integral(const RadialProfile& deriv, double r) {
  return radial_slice_integral([&](double q) { return deriv(q) / q; }, r, deriv.cutoff(), 1);
}

/// Abel inversion of `fhat` (Euclidean form) on its own grid.
inline RadialProfile abel_inverse_core(const RadialProfile& fhat, int d) {
  check_density(fhat, d);
  const double c = abel_constant(d);
  const auto& grid = fhat.grid();
  Parity out_parity = fhat.parity() == Parity::even ? Parity::even : Parity::none;
  if (d % 2 == 1) {
    RadialProfile deriv = fhat.derivative();
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) h[i] = half_order_integral(deriv, grid[i]);
    // -(1/d) * prod_{j<k} (-(d/2 - j)),  k = (d+1)/2
    double coeff = -1.0 / d;
    for (int j = 0; j < (d + 1) / 2; ++j) coeff *= -(0.5 * d - j);
    RadialProfile out(grid, std::move(h), fhat.cutoff(), out_parity);
    for (int j = 0; j < (d - 1) / 2; ++j) out = out.derivative_in_square();
    std::vector<double> v = out.values();
    for (double& x : v) x *= c * coeff;
    return RadialProfile(grid, std::move(v), fhat.cutoff(), out_parity);
  }
  // d even: J_{d/2} -> (-1)^{d/2} (d/2)! J_0, J_0 = -Fhat
  double coeff = -1.0 / d;
  for (int j = 0; j < d / 2; ++j) coeff *= -(0.5 * d - j);
  coeff *= -1.0;
  RadialProfile out = fhat;
  for (int j = 0; j < d / 2; ++j) out = out.derivative_in_square();
  std::vector<double> v = out.values();
  for (double& x : v) x *= c * coeff;
  return RadialProfile(grid, std::move(v), fhat.cutoff(), out_parity);
}

}  // namespace detail

/// Forward Abel transform of a callable F, sampled on `p_grid`; F is taken to
/// vanish beyond `cutoff`.
template <class F>
RadialProfile abel_forward(F&& f, const std::vector<double>& p_grid, double cutoff, int d,
                           Parity parity = Parity::none) {
  detail::check_abel_dimension(d, 3);
  const double omega = unit_sphere_area(d);
  std::vector<double> v(p_grid.size());
  for (std::size_t i = 0; i < p_grid.size(); ++i)
    v[i] = omega * detail::radial_slice_integral(f, p_grid[i], cutoff, d);
  return RadialProfile(p_grid, std::move(v), cutoff, parity);
}

/// Forward Abel transform of a sampled profile, on the profile's own grid.
inline RadialProfile abel_forward(const RadialProfile& f, int d) {
  log_debug("abel_forward: tail level at cutoff ", f.tail_level());
  return abel_forward([&](double q) { return f(q); }, f.grid(), f.cutoff(), d, f.parity());
}

/// Inverse of abel_forward (d = 1, 2, 3) on the grid of `fhat`.
inline RadialProfile abel_inverse(const RadialProfile& fhat, int d) {
  detail::check_abel_dimension(d, 3);
  log_debug("abel_inverse: tail level at cutoff ", fhat.tail_level());
  return detail::abel_inverse_core(fhat, d);
}

/// Hyperbolic Abel transform for profiles over t = cosh q >= 1, evaluated as
/// t^{d-1} Fhat(t) = Omega_d int_t^inf u^{-1} F(u) (u^2 - t^2)^{d/2-1} u du
/// with u = sqrt(t^2 + w^2).
template <class F>
RadialProfile abel_hyp_forward(F&& f, const std::vector<double>& t_grid, double cutoff, int d) {
  detail::check_abel_dimension(d, 2);
  if (t_grid.empty() || t_grid.front() < 1.0)
    throw std::invalid_argument("hyperbolic profiles are indexed by t = cosh p >= 1");
  const double omega = unit_sphere_area(d);
  std::vector<double> v(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    double integral = detail::radial_slice_integral([&](double u) { return f(u) / u; }, t, cutoff, d);
    v[i] = omega * integral / std::pow(t, d - 1);
  }
  return RadialProfile(t_grid, std::move(v), cutoff);
}

inline RadialProfile abel_hyp_forward(const RadialProfile& f, int d) {
  return abel_hyp_forward([&](double u) { return f(u); }, f.grid(), f.cutoff(), d);
}

/// Inverse of abel_hyp_forward: r^{-1} F(r) is the Euclidean Abel inverse of
/// t^{d-1} Fhat(t). The first grid point may be r = 1.
inline RadialProfile abel_hyp_inverse(const RadialProfile& fhat, int d) {
  detail::check_abel_dimension(d, 2);
  if (fhat.front() < 1.0) throw std::invalid_argument("hyperbolic profiles are indexed by t = cosh p >= 1");
  std::vector<double> g = fhat.values();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= std::pow(fhat.grid()[i], d - 1);
  RadialProfile inner = detail::abel_inverse_core(RadialProfile(fhat.grid(), std::move(g), fhat.cutoff()), d);
  std::vector<double> v = inner.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= fhat.grid()[i];
  return RadialProfile(fhat.grid(), std::move(v), fhat.cutoff());
}

}  // namespace hyperdisk
