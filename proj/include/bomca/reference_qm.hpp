#pragma once

// Grid-based reference propagation (Strang-split, spectral kinetic step) and
// the conventional Bohmian quantum-potential diagnostic.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bomca/error.hpp"
#include "bomca/hierarchy.hpp"
#include "bomca/potentials.hpp"

namespace bomca {

inline constexpr double kDefaultEdgeTol = 1e-10;

/// Periodic uniform grid x_j = x_min + j dx, j < n, dx = (x_max - x_min) / n.
struct GridWavefunction {
  double x_min = -1.0;
  double x_max = 1.0;
  std::vector<complex> values;

  std::size_t size() const { return values.size(); }
  double dx() const { return (x_max - x_min) / static_cast<double>(values.size()); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }

  double norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * dx();
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }

  /// Largest |psi| within `width` points of either end.
  double edge_amplitude(std::size_t width = 4) const {
    double m = 0.0;
    for (std::size_t j = 0; j < std::min(width, size()); ++j)
      m = std::max({m, std::abs(values[j]), std::abs(values[size() - 1 - j])});
    return m;
  }

  static GridWavefunction sample(double x_min, double x_max, std::size_t n, auto&& fn) {
    GridWavefunction g{x_min, x_max, std::vector<complex>(n)};
    for (std::size_t j = 0; j < n; ++j) g.values[j] = fn(g.x(j));
    return g;
  }
};

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

/// Samples a Gaussian on the grid after checking that the grid resolves it.
inline GridWavefunction gaussian_on_grid(const GaussianWavepacket& psi0, double x_min, double x_max, std::size_t n,
                                         const PhysicalConstants& consts, double edge_tol = kDefaultEdgeTol) {
  psi0.validate();
  if (!is_power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  if (!(x_min < x_max)) throw Error(ErrorKind::InvalidArgument, "grid requires x_min < x_max");
  const double dx = (x_max - x_min) / static_cast<double>(n);
  const double p_max = std::abs(psi0.p_c) + 6.0 * consts.hbar * std::sqrt(std::abs(psi0.alpha));
  if (p_max > std::numbers::pi * consts.hbar / dx)
    throw Error(ErrorKind::NyquistViolation, "grid spacing " + std::to_string(dx) + " cannot resolve momentum " +
                                                 std::to_string(p_max));
  auto g = GridWavefunction::sample(x_min, x_max, n, [&](double x) { return psi0.value(x, consts.hbar); });
  if (g.edge_amplitude() > edge_tol)
    throw Error(ErrorKind::EdgeContamination, "initial wavepacket reaches the grid edge");
  return g;
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place complex FFT pair over one buffer. The planner is not thread-safe;
// plan creation and destruction are serialized, execution is not.
class FftPair {
 public:
  explicit FftPair(std::size_t n) : n_(n), buf_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    std::lock_guard lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;
  ~FftPair() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  std::span<complex> data() { return {reinterpret_cast<complex*>(buf_), n_}; }
  void forward() { fftw_execute(fwd_); }
  /// Unnormalized inverse transform.
  void backward() { fftw_execute(bwd_); }

 private:
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

/// Angular wavenumbers in FFT order.
inline std::vector<double> wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    const auto s = static_cast<std::ptrdiff_t>(j);
    k[j] = dk * static_cast<double>(j < n / 2 ? s : s - static_cast<std::ptrdiff_t>(n));
  }
  return k;
}

}  // namespace detail

/// Real potential sampled on the grid.
inline std::vector<double> potential_on_grid(const PotentialSpec& spec, const GridWavefunction& g) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = potential_jet(spec, g.x(j), 0, 0.0)[0].real();
  return v;
}

struct SplitOperatorOptions {
  double edge_tol = kDefaultEdgeTol;
  /// Edge amplitude is checked every this many steps (and at the end).
  int edge_check_interval = 64;
  /// Fraction of spectral weight allowed in the top eighth of |k| before NyquistViolation.
  double spectral_tail_tol = 1e-12;
};

/// Strang-split propagation: half potential kick, exact kinetic step in
/// momentum space, half potential kick.
inline GridWavefunction split_operator_propagate(const GridWavefunction& psi0, const PotentialSpec& spec, double t_f,
                                                 int n_steps, const PhysicalConstants& consts,
                                                 const SplitOperatorOptions& opts = {}) {
  consts.validate();
  const std::size_t n = psi0.size();
  if (!is_power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  if (n_steps <= 0 || !(t_f > 0.0)) throw Error(ErrorKind::InvalidArgument, "need n_steps > 0 and t_f > 0");
  if (psi0.edge_amplitude() > opts.edge_tol)
    throw Error(ErrorKind::EdgeContamination, "initial wavefunction reaches the grid edge");

  const double dt = t_f / n_steps;
  const double hbar = consts.hbar;
  const auto k = detail::wavenumbers(n, psi0.x_max - psi0.x_min);
  const auto V = potential_on_grid(spec, psi0);

  std::vector<complex> half_kick(n), drift(n);
  for (std::size_t j = 0; j < n; ++j) {
    half_kick[j] = std::polar(1.0, -V[j] * dt / (2.0 * hbar));
    drift[j] = std::polar(1.0, -hbar * k[j] * k[j] * dt / (2.0 * consts.mass)) / static_cast<double>(n);
  }

  detail::FftPair fft(n);
  auto buf = fft.data();
  std::copy(psi0.values.begin(), psi0.values.end(), buf.begin());

  {
    fft.forward();
    const double k_cut = 0.75 * std::abs(k[n / 2]);
    double total = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::norm(buf[j]);
      total += w;
      if (std::abs(k[j]) > k_cut) tail += w;
    }
    if (tail > opts.spectral_tail_tol * total)
      throw Error(ErrorKind::NyquistViolation, "initial wavefunction has spectral weight near the Nyquist limit");
    fft.backward();
    for (auto& z : buf) z /= static_cast<double>(n);
  }

  GridWavefunction out{psi0.x_min, psi0.x_max, {}};
  auto edge = [&] {
    double m = 0.0;
    for (std::size_t j = 0; j < 4; ++j) m = std::max({m, std::abs(buf[j]), std::abs(buf[n - 1 - j])});
    return m;
  };

  for (int s = 0; s < n_steps; ++s) {
    for (std::size_t j = 0; j < n; ++j) buf[j] *= half_kick[j];
    fft.forward();
    for (std::size_t j = 0; j < n; ++j) buf[j] *= drift[j];
    fft.backward();
    for (std::size_t j = 0; j < n; ++j) buf[j] *= half_kick[j];
    if ((s + 1) % opts.edge_check_interval == 0 || s + 1 == n_steps) {
      if (edge() > opts.edge_tol)
        throw Error(ErrorKind::EdgeContamination,
                    "wavefunction reached the grid edge at t=" + std::to_string((s + 1) * dt));
    }
  }
  out.values.assign(buf.begin(), buf.end());
  return out;
}

/// Band-limited (trigonometric) interpolation of a periodic grid wavefunction.
class SpectralInterpolant {
 public:
  explicit SpectralInterpolant(const GridWavefunction& g)
      : x_min_(g.x_min), length_(g.x_max - g.x_min), k_(detail::wavenumbers(g.size(), length_)) {
    detail::FftPair fft(g.size());
    auto buf = fft.data();
    std::copy(g.values.begin(), g.values.end(), buf.begin());
    fft.forward();
    coeffs_.assign(buf.begin(), buf.end());
    for (auto& c : coeffs_) c /= static_cast<double>(g.size());
  }

  complex operator()(double x) const {
    const std::size_t n = coeffs_.size();
    const double u = x - x_min_;
    complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == n / 2) {
        s += coeffs_[j] * std::cos(k_[j] * u);  // Nyquist term split symmetrically
        continue;
      }
      s += coeffs_[j] * std::polar(1.0, k_[j] * u);
    }
    return s;
  }

  std::vector<complex> operator()(std::span<const double> xs) const {
    std::vector<complex> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
    return out;
  }

 private:
  double x_min_;
  double length_;
  std::vector<double> k_;
  std::vector<complex> coeffs_;
};

/// Conventional Bohmian quantum potential Q = -(hbar^2 / 2m) A_xx / A with A = |psi|.
struct QuantumPotentialField {
  double x_min = 0.0;
  double dx = 0.0;
  std::vector<double> A;
  std::vector<double> Q;
  std::vector<bool> flagged;  ///< amplitude below floor or stencil incomplete; Q is NaN there

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }

  /// max |Q| over unflagged points with x in [lo, hi] and A >= min_amplitude.
  double max_abs_q(double lo, double hi, double min_amplitude = 0.0) const {
    double m = 0.0;
    for (std::size_t j = 0; j < Q.size(); ++j)
      if (!flagged[j] && x(j) >= lo && x(j) <= hi && A[j] >= min_amplitude) m = std::max(m, std::abs(Q[j]));
    return m;
  }

  double max_amplitude() const { return A.empty() ? 0.0 : *std::max_element(A.begin(), A.end()); }
};

inline constexpr double kDefaultAmplitudeFloor = 1e-12;

inline QuantumPotentialField quantum_potential(const GridWavefunction& psi, const PhysicalConstants& consts,
                                               double a_floor = kDefaultAmplitudeFloor) {
  const std::size_t n = psi.size();
  const double dx = psi.dx();
  QuantumPotentialField f{psi.x_min, dx, std::vector<double>(n), std::vector<double>(n, std::nan("")),
                          std::vector<bool>(n, true)};
  for (std::size_t j = 0; j < n; ++j) f.A[j] = std::abs(psi.values[j]);
  const double pref = -consts.hbar * consts.hbar / (2.0 * consts.mass);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    if (f.A[j] < a_floor) continue;
    const double axx =
        (-f.A[j - 2] + 16.0 * f.A[j - 1] - 30.0 * f.A[j] + 16.0 * f.A[j + 1] - f.A[j + 2]) / (12.0 * dx * dx);
    f.Q[j] = pref * axx / f.A[j];
    f.flagged[j] = false;
  }
  return f;
}

/// Probability to the right of x_split. The split point must sit in a gap of the wavefunction.
inline double transmission_probability(const GridWavefunction& psi, double x_split, double split_tol = 1e-8) {
  double p = 0.0;
  double at_split = 0.0, best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double x = psi.x(j);
    if (x > x_split) p += std::norm(psi.values[j]);
    if (std::abs(x - x_split) < best) {
      best = std::abs(x - x_split);
      at_split = std::abs(psi.values[j]);
    }
  }
  if (x_split > psi.x_min && x_split < psi.x_max && at_split >= split_tol)
    throw Error(ErrorKind::SplitPointContaminated,
                "|psi| = " + std::to_string(at_split) + " at the split point " + std::to_string(x_split));
  return p * psi.dx();
}

}  // namespace bomca
