#pragma once

// Closed-form Gaussian solutions for quadratic potentials.

#include <cmath>
#include <complex>
#include <numbers>

#include "bomca/hierarchy.hpp"

namespace bomca::analytic {

/// Free spreading Gaussian psi(x, t) for initial data psi0.
inline complex free_gaussian(const GaussianWavepacket& psi0, const PhysicalConstants& c, double x, double t) {
  const complex i(0.0, 1.0);
  const complex alpha = psi0.alpha;
  const double m = c.mass, hbar = c.hbar;
  const complex denom = 1.0 + 2.0 * i * hbar * alpha * t / m;
  const double q = psi0.x_c + psi0.p_c * t / m;
  const double p = psi0.p_c;
  const complex d = x - q;
  // exp{(i/hbar)[A (x-q)^2 + p (x-q) + gamma]} with A = i hbar alpha / denom.
  const complex A = i * hbar * alpha / denom;
  const complex gamma = p * p * t / (2.0 * m) - i * hbar * psi0.log_norm() + 0.5 * i * hbar * std::log(denom);
  return std::exp(i / hbar * (A * d * d + p * d + gamma));
}

/// Coherent state of V = k x^2 / 2 when alpha = m omega / (2 hbar); general
/// Gaussians are handled through the complex width A(t).
inline complex harmonic_gaussian(const GaussianWavepacket& psi0, const PhysicalConstants& c, double k, double x,
                                 double t) {
  const complex i(0.0, 1.0);
  const double m = c.mass, hbar = c.hbar;
  const double w = std::sqrt(k / m);
  const double cs = std::cos(w * t), sn = std::sin(w * t);
  const double q = psi0.x_c * cs + psi0.p_c / (m * w) * sn;
  const double p = psi0.p_c * cs - m * w * psi0.x_c * sn;
  // Width A(t) solves dA/dt = -2A^2/m - k/2, i.e. A = (m/2) d/dt ln(den).
  const complex A0 = i * hbar * psi0.alpha;
  const complex num = A0 * cs - 0.5 * m * w * sn;
  const complex den = cs + 2.0 * A0 / (m * w) * sn;
  const complex A = num / den;
  // gamma' = i hbar A / m + p^2/2m - k q^2/2; the Lagrangian integrates to
  // (p q - p0 q0)/2 and A/m to ln(den)/2.
  // den winds around the origin once per period; keep its phase continuous in t.
  const double turns = std::round((w * t - std::arg(den)) / (2.0 * std::numbers::pi));
  const complex log_den(std::log(std::abs(den)), std::arg(den) + 2.0 * std::numbers::pi * turns);
  const complex gamma = -i * hbar * psi0.log_norm() + 0.5 * (p * q - psi0.p_c * psi0.x_c) + 0.5 * i * hbar * log_den;
  const complex d = x - q;
  return std::exp(i / hbar * (A * d * d + p * d + gamma));
}

}  // namespace bomca::analytic
