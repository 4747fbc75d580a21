#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "bomca/error.hpp"
#include "bomca/jet.hpp"

namespace bomca {

/// V(x) = 0.
struct FreePotential {};

/// V(x) = k x^2 / 2.
struct HarmonicPotential {
  double k = 1.0;
};

/// Eckart barrier V(x) = D / cosh^2(beta x). Poles at x = i (pi/2 + n pi) / beta.
struct EckartPotential {
  double D = 40.0;
  double beta = 4.32;
};

/// Default minimum allowed distance between a trajectory and a potential pole.
inline constexpr double kDefaultPoleClearance = 0.02;

class PotentialSpec {
 public:
  using Variant = std::variant<FreePotential, HarmonicPotential, EckartPotential>;

  PotentialSpec() = default;
  PotentialSpec(FreePotential p) : v_(p) {}
  PotentialSpec(HarmonicPotential p) : v_(p) {
    if (!(p.k >= 0.0)) throw Error(ErrorKind::InvalidArgument, "harmonic k must be >= 0");
  }
  PotentialSpec(EckartPotential p) : v_(p) {
    if (!(p.D > 0.0) || !(p.beta > 0.0))
      throw Error(ErrorKind::InvalidArgument, "Eckart D and beta must be > 0");
  }

  const Variant& variant() const { return v_; }

  std::string kind() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, FreePotential>) return "free";
          else if constexpr (std::is_same_v<T, HarmonicPotential>) return "harmonic";
          else return "eckart";
        },
        v_);
  }

  bool has_poles() const { return std::holds_alternative<EckartPotential>(v_); }

  friend bool operator==(const PotentialSpec& a, const PotentialSpec& b) {
    if (a.v_.index() != b.v_.index()) return false;
    if (auto* h = std::get_if<HarmonicPotential>(&a.v_)) return h->k == std::get<HarmonicPotential>(b.v_).k;
    if (auto* e = std::get_if<EckartPotential>(&a.v_)) {
      const auto& o = std::get<EckartPotential>(b.v_);
      return e->D == o.D && e->beta == o.beta;
    }
    return true;
  }

 private:
  Variant v_{FreePotential{}};
};

/// Distance from x to the nearest singularity; +inf for entire potentials.
inline double pole_distance(const PotentialSpec& spec, complex x) {
  if (const auto* e = std::get_if<EckartPotential>(&spec.variant())) {
    // Poles sit on the imaginary axis at spacing pi/beta, offset by half a spacing.
    const double spacing = std::numbers::pi / e->beta;
    const double n = std::round(x.imag() / spacing - 0.5);
    const double pole_im = (n + 0.5) * spacing;
    return std::hypot(x.real(), x.imag() - pole_im);
  }
  return std::numeric_limits<double>::infinity();
}

/// V and its derivatives through `order` at complex x.
///
/// Throws PoleProximity if x is within `clearance` of a pole.
inline Jet potential_jet(const PotentialSpec& spec, complex x, int order,
                         double clearance = kDefaultPoleClearance) {
  return std::visit(
      [&](const auto& p) -> Jet {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FreePotential>) {
          return Jet(order);
        } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
          Jet j(order);
          j[0] = 0.5 * p.k * x * x;
          if (order >= 1) j[1] = p.k * x;
          if (order >= 2) j[2] = p.k;
          return j;
        } else {
          const double d = pole_distance(spec, x);
          if (d <= clearance)
            throw Error(ErrorKind::PoleProximity, "x = (" + std::to_string(x.real()) + ", " +
                                                      std::to_string(x.imag()) + ") is " + std::to_string(d) +
                                                      " from an Eckart pole (clearance " +
                                                      std::to_string(clearance) + ")");
          return p.D * jet_sech2(p.beta * jet_variable(x, order));
        }
      },
      spec.variant());
}

}  // namespace bomca
