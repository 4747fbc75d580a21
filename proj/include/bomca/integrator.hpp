#pragma once

// Adaptive Dormand-Prince 5(4) integration of complex ODE systems with PI
// step-size control, plus the trajectory-level driver used by the root finder.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bomca/error.hpp"
#include "bomca/hierarchy.hpp"

namespace bomca {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double h_init = 1e-4;
  double h_min = 1e-12;
  double h_max = 0.0;  ///< <= 0 means (t_f - t_0) / 100
  long max_steps = 1'000'000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be > 0");
    if (!(h_min > 0.0) || !(h_init >= h_min)) throw Error(ErrorKind::InvalidArgument, "need 0 < h_min <= h_init");
    if (h_max > 0.0 && h_init > h_max) throw Error(ErrorKind::InvalidArgument, "need h_init <= h_max");
    if (max_steps <= 0) throw Error(ErrorKind::InvalidArgument, "max_steps must be > 0");
  }

  bool operator==(const IntegratorConfig&) const = default;
};

enum class TrajectoryStatus { Ok, StepSizeUnderflow, MaxStepsExceeded, PoleProximity, Overflow };

constexpr std::string_view to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Ok: return "ok";
    case TrajectoryStatus::StepSizeUnderflow: return "StepSizeUnderflow";
    case TrajectoryStatus::MaxStepsExceeded: return "MaxStepsExceeded";
    case TrajectoryStatus::PoleProximity: return "PoleProximity";
    case TrajectoryStatus::Overflow: return "Overflow";
  }
  return "unknown";
}

struct StepDiagnostics {
  long accepted = 0;
  long rejected = 0;
  double min_pole_distance = std::numeric_limits<double>::infinity();
  double max_abs_im_x = 0.0;  ///< largest |Im x(t)| over accepted steps
};

namespace detail {

// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th- and embedded 4th-order weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace detail

/// Result of an ODE integration.
struct OdeResult {
  TrajectoryStatus status = TrajectoryStatus::Ok;
  double t = 0.0;
  std::vector<complex> y;
  StepDiagnostics diagnostics;
  std::string message;
};

/// Integrates dy/dt = f(t, y) from t0 to t_f.
///
/// `system(t, y, dy)` may throw Error(PoleProximity); the step is then
/// rejected and retried with a smaller h. `weights[i]` scales the absolute
/// tolerance of component i. `on_accept(t, y)` inspects each accepted state
/// and returns a non-Ok status to stop.
template <class System, class OnAccept>
OdeResult integrate(const System& system, double t0, std::vector<complex> y0, double t_f,
                    std::span<const double> weights, const IntegratorConfig& cfg, OnAccept&& on_accept) {
  using namespace detail;
  cfg.validate();
  if (!(t0 < t_f)) throw Error(ErrorKind::InvalidArgument, "integration requires t0 < t_f");
  const std::size_t n = y0.size();
  if (weights.size() != n) throw Error(ErrorKind::InvalidArgument, "weights size mismatch");

  OdeResult out;
  out.t = t0;
  out.y = std::move(y0);
  const double h_max = cfg.h_max > 0.0 ? cfg.h_max : (t_f - t0) / 100.0;

  std::vector<complex> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  auto& y = out.y;
  double t = t0;
  double h = std::min(cfg.h_init, h_max);
  double err_old = 1e-4;
  bool have_k1 = false;
  bool last_rejected = false;

  auto fail = [&](TrajectoryStatus s, std::string msg) {
    out.status = s;
    out.t = t;
    out.message = std::move(msg);
    return out;
  };

  if (auto s = on_accept(t, std::span<const complex>(y)); s != TrajectoryStatus::Ok)
    return fail(s, "initial state rejected");

  while (t < t_f) {
    if (out.diagnostics.accepted + out.diagnostics.rejected >= cfg.max_steps)
      return fail(TrajectoryStatus::MaxStepsExceeded, "max_steps reached");
    bool last = false;
    if (t + h >= t_f) {
      h = t_f - t;
      last = true;
    }

    double err = 0.0;
    bool stage_failed = false;
    try {
      if (!have_k1) {
        system(t, y, k1);
        have_k1 = true;
      }
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
      system(t + c2 * h, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      system(t + c3 * h, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      system(t + c4 * h, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      system(t + c5 * h, tmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      system(t + h, tmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      system(t + h, y_new, k7);

      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = cfg.abs_tol * weights[i] + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double r = std::abs(e) / sc;
        acc += r * r;
      }
      err = std::sqrt(acc / static_cast<double>(n));
      if (!std::isfinite(err)) stage_failed = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleProximity) throw;
      stage_failed = true;
    }

    if (stage_failed) {
      ++out.diagnostics.rejected;
      h *= 0.25;
      last_rejected = true;
      if (h < cfg.h_min) return fail(TrajectoryStatus::PoleProximity, "stage evaluation kept hitting a pole");
      continue;
    }

    if (err <= 1.0) {
      // PI controller (Hairer & Wanner, DOPRI5 constants).
      double fac = std::pow(err, 0.17) / std::pow(err_old, 0.04) / 0.9;
      fac = std::clamp(fac, 0.1, 5.0);
      double h_next = h / fac;
      if (last_rejected) h_next = std::min(h_next, h);
      err_old = std::max(err, 1e-4);
      t = last ? t_f : t + h;
      std::swap(y, y_new);
      std::swap(k1, k7);
      ++out.diagnostics.accepted;
      last_rejected = false;
      if (auto s = on_accept(t, std::span<const complex>(y)); s != TrajectoryStatus::Ok)
        return fail(s, "accepted state rejected at t=" + std::to_string(t));
      h = std::min(h_next, h_max);
    } else {
      ++out.diagnostics.rejected;
      h /= std::min(5.0, std::pow(err, 0.17) / 0.9);
      last_rejected = true;
    }
    if (h < cfg.h_min && t < t_f) return fail(TrajectoryStatus::StepSizeUnderflow, "step size below h_min");
  }
  out.t = t;
  return out;
}

/// Largest -Im(S)/hbar (log of |psi|) accepted during propagation.
inline constexpr double kLogOverflowThreshold = 700.0;

struct PropagationResult {
  TrajectoryStatus status = TrajectoryStatus::Ok;
  TrajectoryState state;
  StepDiagnostics diagnostics;
  std::string message;

  bool ok() const { return status == TrajectoryStatus::Ok; }
};

/// Absolute-tolerance weights for the hierarchy layout: x and M carry 1,
/// v_n carries length_scale^-n, dv_n/dx0 carries length_scale^-(n+1), S carries hbar.
inline std::vector<double> hierarchy_weights(const Hierarchy& h, double length_scale) {
  std::vector<double> w(h.size(), 1.0);
  const int n_max = h.truncation();
  for (int n = 0; n <= n_max; ++n) {
    w[h.v_index(n)] = std::pow(length_scale, -n);
    w[h.w_index(n)] = std::pow(length_scale, -(n + 1));
  }
  w[h.s_index()] = h.constants().hbar;
  return w;
}

/// Propagates a trajectory state to t_f under the truncated hierarchy.
///
/// Failures (pole capture, step underflow, action overflow) are reported in
/// the result status rather than thrown.
inline PropagationResult propagate(const TrajectoryState& state0, const Hierarchy& hierarchy, double t_f,
                                   const IntegratorConfig& cfg, double length_scale = 1.0) {
  const auto weights = hierarchy_weights(hierarchy, length_scale);
  const double hbar = hierarchy.constants().hbar;
  const PotentialSpec& pot = hierarchy.potential();
  const bool poles = pot.has_poles();
  StepDiagnostics seen;

  auto check = [&](double, std::span<const complex> y) {
    for (const complex& c : y)
      if (!is_finite(c)) return TrajectoryStatus::Overflow;
    seen.max_abs_im_x = std::max(seen.max_abs_im_x, std::abs(y[hierarchy.x_index()].imag()));
    if (poles) {
      const double d = pole_distance(pot, y[hierarchy.x_index()]);
      seen.min_pole_distance = std::min(seen.min_pole_distance, d);
      if (d <= hierarchy.pole_clearance()) return TrajectoryStatus::PoleProximity;
    }
    if (-y[hierarchy.s_index()].imag() / hbar > kLogOverflowThreshold) return TrajectoryStatus::Overflow;
    return TrajectoryStatus::Ok;
  };

  auto r = integrate(hierarchy, state0.t, hierarchy.pack(state0), t_f, weights, cfg, check);
  PropagationResult out;
  out.status = r.status;
  out.message = std::move(r.message);
  out.diagnostics = r.diagnostics;
  out.diagnostics.min_pole_distance = seen.min_pole_distance;
  out.diagnostics.max_abs_im_x = seen.max_abs_im_x;
  out.state = hierarchy.unpack(r.t, r.y);
  return out;
}

}  // namespace bomca
