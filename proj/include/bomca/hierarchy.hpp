#pragma once

// Equations of motion for complex quantum trajectories.
//
// Along a trajectory x(t; x0) with velocity field v = S_x / m, the spatial
// derivatives v^(n) obey
//
//   dv^(n)/dt = -V^(n+1)/m + (i hbar / 2m) v^(n+2) - g_n,
//   g_0 = 0,  g_n = sum_{j=1..n} C(n,j) v^(j) v^(n-j+1),
//
// closed at order N by v^(N+1) = v^(N+2) = 0. The action follows
// dS/dt = m v^2/2 - V + (i hbar/2) v_x, and psi = exp(i S / hbar).
//
// Besides (x, v, S) the state carries the first-order sensitivity of every
// component with respect to the (complex) starting point x0. Its x-component
// is the monodromy M = dx(t)/dx0 used as the Newton Jacobian. For N = 1 it
// coincides with the scalar equation dM/dt = v_x M.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bomca/error.hpp"
#include "bomca/jet.hpp"
#include "bomca/potentials.hpp"

namespace bomca {

struct PhysicalConstants {
  double mass = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(mass > 0.0)) throw Error(ErrorKind::InvalidArgument, "mass must be > 0");
    if (!(hbar > 0.0)) throw Error(ErrorKind::InvalidArgument, "hbar must be > 0");
  }

  bool operator==(const PhysicalConstants&) const = default;
};

/// psi(x, 0) = (2 alpha / pi)^(1/4) exp[-alpha (x - x_c)^2 + (i/hbar) p_c (x - x_c)].
struct GaussianWavepacket {
  complex alpha = std::numbers::pi;
  double x_c = 0.0;
  double p_c = 0.0;

  void validate() const {
    if (!(alpha.real() > 0.0)) throw Error(ErrorKind::InvalidArgument, "Re(alpha) must be > 0");
  }

  complex log_norm() const { return 0.25 * std::log(2.0 * alpha / std::numbers::pi); }

  /// ln psi(x, 0), single-valued in x (the quadratic exponent plus a constant).
  complex log_value(complex x, double hbar) const {
    const complex d = x - x_c;
    return log_norm() - alpha * d * d + complex(0.0, p_c / hbar) * d;
  }

  complex value(complex x, double hbar) const { return std::exp(log_value(x, hbar)); }

  bool operator==(const GaussianWavepacket&) const = default;
};

/// One trajectory at one instant.
struct TrajectoryState {
  double t = 0.0;
  complex x;
  std::vector<complex> v;  ///< v[n] = n-th spatial derivative of the velocity field, n = 0..N
  complex S;
  complex M = 1.0;                      ///< dx/dx0
  std::vector<complex> v_sensitivity;  ///< dv[n]/dx0

  int truncation() const { return static_cast<int>(v.size()) - 1; }
};

/// g_n = sum_{j=1..n} C(n,j) v[j] v[n-j+1]; entries beyond v.size() are zero.
inline complex gtilde(int n, std::span<const complex> v) {
  if (n <= 0) return 0.0;
  const auto at = [&](int k) -> complex { return k < static_cast<int>(v.size()) ? v[k] : complex{}; };
  complex s = 0.0;
  for (int j = 1; j <= n; ++j) s += binomial(n, j) * at(j) * at(n - j + 1);
  return s;
}

/// Truncated hierarchy packaged as a first-order ODE on a flat complex vector.
///
/// Layout: [x, v_0..v_N, S, M, w_0..w_N] with w_n = dv_n/dx0.
class Hierarchy {
 public:
  Hierarchy(PotentialSpec potential, PhysicalConstants consts, int truncation,
            double pole_clearance = kDefaultPoleClearance)
      : potential_(std::move(potential)), consts_(consts), n_(truncation), clearance_(pole_clearance) {
    consts_.validate();
    if (n_ < 1)
      throw Error(ErrorKind::InvalidArgument,
                  "truncation N must be >= 1 (the action equation needs v_x), got " + std::to_string(n_));
    if (n_ + 2 > kMaxJetOrder)
      throw Error(ErrorKind::InvalidArgument, "truncation N must be <= " + std::to_string(kMaxJetOrder - 2));
  }

  int truncation() const { return n_; }
  const PotentialSpec& potential() const { return potential_; }
  const PhysicalConstants& constants() const { return consts_; }
  double pole_clearance() const { return clearance_; }

  std::size_t size() const { return static_cast<std::size_t>(2 * n_ + 5); }
  std::size_t x_index() const { return 0; }
  std::size_t v_index(int n) const { return static_cast<std::size_t>(1 + n); }
  std::size_t s_index() const { return static_cast<std::size_t>(n_ + 2); }
  std::size_t m_index() const { return static_cast<std::size_t>(n_ + 3); }
  std::size_t w_index(int n) const { return static_cast<std::size_t>(n_ + 4 + n); }

  std::vector<complex> pack(const TrajectoryState& s) const {
    if (s.truncation() != n_ || s.v_sensitivity.size() != s.v.size())
      throw Error(ErrorKind::InvalidArgument, "trajectory state does not match truncation N=" + std::to_string(n_));
    std::vector<complex> y(size());
    y[x_index()] = s.x;
    for (int n = 0; n <= n_; ++n) {
      y[v_index(n)] = s.v[n];
      y[w_index(n)] = s.v_sensitivity[n];
    }
    y[s_index()] = s.S;
    y[m_index()] = s.M;
    return y;
  }

  TrajectoryState unpack(double t, std::span<const complex> y) const {
    TrajectoryState s;
    s.t = t;
    s.x = y[x_index()];
    s.v.resize(n_ + 1);
    s.v_sensitivity.resize(n_ + 1);
    for (int n = 0; n <= n_; ++n) {
      s.v[n] = y[v_index(n)];
      s.v_sensitivity[n] = y[w_index(n)];
    }
    s.S = y[s_index()];
    s.M = y[m_index()];
    return s;
  }

  /// Time derivative of the flat state. Throws PoleProximity near a pole.
  void operator()(double /*t*/, std::span<const complex> y, std::span<complex> dy) const {
    const double m = consts_.mass;
    const complex quantum = complex(0.0, consts_.hbar / (2.0 * m));
    const complex x = y[x_index()];
    const Jet V = potential_jet(potential_, x, n_ + 2, clearance_);

    // v and w padded with the two truncated (zero) orders.
    std::array<complex, kMaxJetOrder + 3> v{}, w{};
    for (int n = 0; n <= n_; ++n) {
      v[n] = y[v_index(n)];
      w[n] = y[w_index(n)];
    }
    const complex X = y[m_index()];

    dy[x_index()] = v[0];
    dy[m_index()] = w[0];
    for (int n = 0; n <= n_; ++n) {
      complex g = 0.0, dg = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double c = binomial(n, j);
        g += c * v[j] * v[n - j + 1];
        dg += c * (w[j] * v[n - j + 1] + v[j] * w[n - j + 1]);
      }
      dy[v_index(n)] = -V[n + 1] / m + quantum * v[n + 2] - g;
      dy[w_index(n)] = -V[n + 2] * X / m + quantum * w[n + 2] - dg;
    }
    dy[s_index()] = 0.5 * m * v[0] * v[0] - V[0] + complex(0.0, 0.5 * consts_.hbar) * v[1];
  }

 private:
  PotentialSpec potential_;
  PhysicalConstants consts_;
  int n_;
  double clearance_;
};

/// Initial trajectory state at complex x0 for a Gaussian wavepacket.
inline TrajectoryState initial_state(const GaussianWavepacket& psi0, complex x0, int truncation,
                                     const PhysicalConstants& consts) {
  psi0.validate();
  consts.validate();
  if (truncation < 1) throw Error(ErrorKind::InvalidArgument, "truncation N must be >= 1");
  const double m = consts.mass;
  const complex i_hbar(0.0, consts.hbar);
  TrajectoryState s;
  s.t = 0.0;
  s.x = x0;
  s.v.assign(truncation + 1, complex{});
  s.v_sensitivity.assign(truncation + 1, complex{});
  // -i hbar d/dx ln psi is linear in x for a Gaussian; higher derivatives vanish.
  s.v[0] = (psi0.p_c + 2.0 * i_hbar * psi0.alpha * (x0 - psi0.x_c)) / m;
  s.v[1] = 2.0 * i_hbar * psi0.alpha / m;
  s.v_sensitivity[0] = s.v[1];
  s.S = -i_hbar * psi0.log_value(x0, consts.hbar);
  s.M = 1.0;
  return s;
}

/// Time derivative of a trajectory state (same shape as the state; t holds 1).
inline TrajectoryState hierarchy_rhs(const TrajectoryState& state, const PotentialSpec& spec, int truncation,
                                     const PhysicalConstants& consts,
                                     double pole_clearance = kDefaultPoleClearance) {
  const Hierarchy h(spec, consts, truncation, pole_clearance);
  const auto y = h.pack(state);
  std::vector<complex> dy(y.size());
  h(state.t, y, dy);
  auto d = h.unpack(1.0, dy);
  return d;
}

}  // namespace bomca
