#pragma once

// Truncated Taylor arithmetic over complex scalars.
//
// A Jet stores the value and derivatives of an analytic function at a single
// (complex) point: coeffs[k] = f^(k)(x). Note these are derivative values,
// not Taylor coefficients; products follow the Leibniz rule directly.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "bomca/error.hpp"

namespace bomca {

using complex = std::complex<double>;

inline bool is_finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Highest derivative order a Jet can carry.
inline constexpr int kMaxJetOrder = 16;

/// Default minimum |leading value| accepted by jet_recip / jet_sech2.
inline constexpr double kDefaultPoleEpsilon = 1e-8;

namespace detail {

inline constexpr auto kFactorials = [] {
  std::array<double, kMaxJetOrder + 1> f{};
  f[0] = 1.0;
  for (int k = 1; k <= kMaxJetOrder; ++k) f[k] = f[k - 1] * k;
  return f;
}();

inline constexpr auto kBinomials = [] {
  std::array<std::array<double, kMaxJetOrder + 3>, kMaxJetOrder + 3> c{};
  for (int n = 0; n < kMaxJetOrder + 3; ++n) {
    c[n][0] = 1.0;
    for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0.0);
  }
  return c;
}();

}  // namespace detail

/// Binomial coefficient C(n, k) for n <= kMaxJetOrder + 2.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return detail::kBinomials[n][k];
}

class Jet {
 public:
  Jet() = default;

  /// Zero jet of the given order.
  explicit Jet(int order) : order_(order) {
    if (order < 0 || order > kMaxJetOrder)
      throw Error(ErrorKind::InvalidArgument, "jet order " + std::to_string(order) + " outside [0, " +
                                                  std::to_string(kMaxJetOrder) + "]");
  }

  Jet(std::initializer_list<complex> coeffs) : Jet(static_cast<int>(coeffs.size()) - 1) {
    std::size_t k = 0;
    for (complex c : coeffs) coeffs_[k++] = c;
  }

  static Jet constant(complex c, int order) {
    Jet j(order);
    j.coeffs_[0] = c;
    return j;
  }

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(order_) + 1; }

  complex& operator[](std::size_t k) { return coeffs_[k]; }
  const complex& operator[](std::size_t k) const { return coeffs_[k]; }

  std::span<const complex> coeffs() const { return {coeffs_.data(), size()}; }
  std::span<complex> coeffs() { return {coeffs_.data(), size()}; }

  complex value() const { return coeffs_[0]; }

  bool finite() const {
    for (std::size_t k = 0; k < size(); ++k)
      if (!is_finite(coeffs_[k])) return false;
    return true;
  }

  Jet& operator+=(const Jet& o) {
    check_order(o);
    for (std::size_t k = 0; k < size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_order(o);
    for (std::size_t k = 0; k < size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  Jet& operator*=(complex s) {
    for (std::size_t k = 0; k < size(); ++k) coeffs_[k] *= s;
    return *this;
  }

  void check_order(const Jet& o) const {
    if (o.order_ != order_)
      throw Error(ErrorKind::OrderMismatch,
                  "jet orders differ: " + std::to_string(order_) + " vs " + std::to_string(o.order_));
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    if (a.order_ != b.order_) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a.coeffs_[k] != b.coeffs_[k]) return false;
    return true;
  }

 private:
  int order_ = 0;
  std::array<complex, kMaxJetOrder + 1> coeffs_{};
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, complex s) { return a *= s; }
inline Jet operator*(complex s, Jet a) { return a *= s; }
inline Jet operator-(Jet a) { return a *= -1.0; }

/// Identity function at x: [x, 1, 0, ...].
inline Jet jet_variable(complex x, int order) {
  Jet j(order);
  j[0] = x;
  if (order >= 1) j[1] = 1.0;
  return j;
}

/// Leibniz product: c_n = sum_j C(n,j) a_j b_{n-j}.
inline Jet jet_mul(const Jet& a, const Jet& b) {
  a.check_order(b);
  Jet c(a.order());
  for (int n = 0; n <= a.order(); ++n) {
    complex s = 0.0;
    for (int j = 0; j <= n; ++j) s += binomial(n, j) * a[j] * b[n - j];
    c[n] = s;
  }
  return c;
}

inline Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }

namespace detail {

// Conversions between derivative values and normalized Taylor coefficients;
// the univariate recurrences below are simplest in the latter.
inline std::array<complex, kMaxJetOrder + 1> to_taylor(const Jet& a) {
  std::array<complex, kMaxJetOrder + 1> t{};
  for (int k = 0; k <= a.order(); ++k) t[k] = a[k] / kFactorials[k];
  return t;
}

inline Jet from_taylor(const std::array<complex, kMaxJetOrder + 1>& t, int order) {
  Jet j(order);
  for (int k = 0; k <= order; ++k) j[k] = t[k] * kFactorials[k];
  return j;
}

// cosh and sinh of a jet together: c' = s a', s' = c a'.
inline void cosh_sinh_taylor(const Jet& a, std::array<complex, kMaxJetOrder + 1>& c,
                             std::array<complex, kMaxJetOrder + 1>& s) {
  const auto t = to_taylor(a);
  c = {};
  s = {};
  c[0] = std::cosh(t[0]);
  s[0] = std::sinh(t[0]);
  for (int k = 1; k <= a.order(); ++k) {
    complex ck = 0.0, sk = 0.0;
    for (int j = 1; j <= k; ++j) {
      ck += static_cast<double>(j) * t[j] * s[k - j];
      sk += static_cast<double>(j) * t[j] * c[k - j];
    }
    c[k] = ck / static_cast<double>(k);
    s[k] = sk / static_cast<double>(k);
  }
}

}  // namespace detail

inline Jet jet_exp(const Jet& a) {
  const auto t = detail::to_taylor(a);
  std::array<complex, kMaxJetOrder + 1> e{};
  e[0] = std::exp(t[0]);
  for (int k = 1; k <= a.order(); ++k) {
    complex s = 0.0;
    for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * t[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return detail::from_taylor(e, a.order());
}

inline Jet jet_cosh(const Jet& a) {
  std::array<complex, kMaxJetOrder + 1> c, s;
  detail::cosh_sinh_taylor(a, c, s);
  return detail::from_taylor(c, a.order());
}

inline Jet jet_sinh(const Jet& a) {
  std::array<complex, kMaxJetOrder + 1> c, s;
  detail::cosh_sinh_taylor(a, c, s);
  return detail::from_taylor(s, a.order());
}

/// 1/a. Throws PoleProximity when |a(x)| < eps_pole.
inline Jet jet_recip(const Jet& a, double eps_pole = kDefaultPoleEpsilon) {
  if (std::abs(a[0]) < eps_pole)
    throw Error(ErrorKind::PoleProximity, "reciprocal of a jet with |value| < " + std::to_string(eps_pole));
  const auto t = detail::to_taylor(a);
  std::array<complex, kMaxJetOrder + 1> r{};
  r[0] = 1.0 / t[0];
  for (int k = 1; k <= a.order(); ++k) {
    complex s = 0.0;
    for (int j = 1; j <= k; ++j) s += t[j] * r[k - j];
    r[k] = -s * r[0];
  }
  return detail::from_taylor(r, a.order());
}

/// sech^2(a) = 1/cosh^2(a). Throws PoleProximity when |cosh(a(x))| < eps_pole.
inline Jet jet_sech2(const Jet& a, double eps_pole = kDefaultPoleEpsilon) {
  const Jet c = jet_cosh(a);
  if (std::abs(c[0]) < eps_pole)
    throw Error(ErrorKind::PoleProximity, "cosh vanishes (|cosh| < " + std::to_string(eps_pole) + ")");
  return jet_recip(c * c, 0.0);
}

}  // namespace bomca
