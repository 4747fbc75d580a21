#include <gtest/gtest.h>

#include "bomca/analytic.hpp"
#include "bomca/reference_qm.hpp"

using namespace bomca;

namespace {
const PhysicalConstants kUnit{1.0, 1.0};
}

TEST(SplitOperator, FreeGaussianMatchesAnalytic) {
  const GaussianWavepacket g{complex(2.0, 0.0), -1.0, 3.0};
  const auto psi0 = gaussian_on_grid(g, -16.0, 16.0, 2048, kUnit);
  const auto psi = split_operator_propagate(psi0, FreePotential{}, 1.0, 16, kUnit);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const complex exact = analytic::free_gaussian(g, kUnit, psi.x(j), 1.0);
    worst = std::max(worst, std::abs(psi.values[j] - exact));
    peak = std::max(peak, std::abs(exact));
  }
  EXPECT_LT(worst / peak, 1e-8);
}

TEST(SplitOperator, CoherentStateReturnsAfterOnePeriod) {
  const double w = 2.0 * std::numbers::pi;
  const GaussianWavepacket g{complex(w / 2.0, 0.0), 0.5, 0.0};
  const auto psi0 = gaussian_on_grid(g, -8.0, 8.0, 512, kUnit);
  const auto psi = split_operator_propagate(psi0, HarmonicPotential{w * w}, 1.0, 4096, kUnit);
  double worst = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j)
    worst = std::max(worst, std::abs(std::abs(psi.values[j]) - std::abs(psi0.values[j])));
  EXPECT_LT(worst / psi0.max_abs(), 1e-6);
}

TEST(SplitOperator, HarmonicMatchesAnalytic) {
  const double k = 9.0;
  const GaussianWavepacket g{complex(1.0, 0.0), 0.7, 1.0};
  const auto psi0 = gaussian_on_grid(g, -10.0, 10.0, 1024, kUnit);
  const auto psi = split_operator_propagate(psi0, HarmonicPotential{k}, 0.8, 8192, kUnit);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const complex exact = analytic::harmonic_gaussian(g, kUnit, k, psi.x(j), 0.8);
    worst = std::max(worst, std::abs(psi.values[j] - exact));
    peak = std::max(peak, std::abs(exact));
  }
  EXPECT_LT(worst / peak, 1e-6);
}

TEST(SplitOperator, NormConservedOnBarrier) {
  const PhysicalConstants c{1.0, 1.0};
  const GaussianWavepacket g{complex(20.0, 0.0), -1.5, 6.0};
  const auto psi0 = gaussian_on_grid(g, -16.0, 16.0, 2048, c);
  const auto psi = split_operator_propagate(psi0, EckartPotential{10.0, 2.0}, 0.3, 3000, c);
  EXPECT_LT(std::abs(psi.norm() - psi0.norm()), 1e-10);
}

TEST(SplitOperator, Errors) {
  const GaussianWavepacket g{complex(2.0, 0.0), 0.0, 0.0};
  EXPECT_THROW(gaussian_on_grid(g, -8.0, 8.0, 1000, kUnit), Error);
  try {
    gaussian_on_grid(GaussianWavepacket{complex(2.0, 0.0), 0.0, 500.0}, -8.0, 8.0, 256, kUnit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NyquistViolation);
  }
  try {
    gaussian_on_grid(g, -1.0, 1.0, 256, kUnit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EdgeContamination);
  }
  // Fast packet runs into the edge during propagation.
  const auto fast = gaussian_on_grid(GaussianWavepacket{complex(2.0, 0.0), 0.0, 20.0}, -8.0, 8.0, 1024, kUnit);
  try {
    split_operator_propagate(fast, FreePotential{}, 1.0, 200, kUnit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EdgeContamination);
  }
}

TEST(SpectralInterpolant, ReproducesBandLimitedFunction) {
  const auto g = GridWavefunction::sample(0.0, 2.0 * std::numbers::pi, 64,
                                          [](double x) { return std::polar(1.0, 3.0 * x) + 0.5 * std::cos(x); });
  const SpectralInterpolant f(g);
  for (std::size_t j = 0; j < g.size(); j += 7) EXPECT_LT(std::abs(f(g.x(j)) - g.values[j]), 1e-13);
  for (double x : {0.123, 1.7, 4.4}) EXPECT_LT(std::abs(f(x) - (std::polar(1.0, 3.0 * x) + 0.5 * std::cos(x))), 1e-13);
}

TEST(QuantumPotential, GaussianClosedForm) {
  // For A = exp(-alpha (x - x_c)^2): Q = (hbar^2 alpha / m)(1 - 2 alpha (x - x_c)^2).
  const PhysicalConstants c{2.0, 1.0};
  const GaussianWavepacket g{complex(3.0, 0.0), 0.2, 1.0};
  const auto psi = gaussian_on_grid(g, -6.0, 6.0, 2048, c);
  const auto q = quantum_potential(psi, c);
  for (std::size_t j = 2; j + 2 < psi.size(); ++j) {
    const double d = psi.x(j) - 0.2;
    if (std::abs(d) > 1.0) continue;
    ASSERT_FALSE(q.flagged[j]);
    EXPECT_NEAR(q.Q[j], 3.0 / 2.0 * (1.0 - 6.0 * d * d), 1e-6);
  }
  EXPECT_TRUE(q.flagged[0]);
}

TEST(QuantumPotential, PlaneWaveIsZero) {
  const auto psi = GridWavefunction::sample(0.0, 1.0, 128, [](double x) { return std::polar(1.0, 2.0 * std::numbers::pi * 3 * x); });
  const auto q = quantum_potential(psi, kUnit);
  EXPECT_LT(q.max_abs_q(0.0, 1.0), 1e-9);
}

TEST(QuantumPotential, GrowsAsMinimumDeepens) {
  // |e^{ikx} + r e^{-ikx}| has minima 1 - r; Q there grows as r -> 1.
  double prev = 0.0;
  for (double r : {0.3, 0.6, 0.9}) {
    const auto psi = GridWavefunction::sample(0.0, 1.0, 256, [&](double x) {
      const double k = 2.0 * std::numbers::pi * 2;
      return std::polar(1.0, k * x) + r * std::polar(1.0, -k * x);
    });
    const double q = quantum_potential(psi, kUnit).max_abs_q(0.0, 1.0);
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(Transmission, EdgeCases) {
  const GaussianWavepacket g{complex(2.0, 0.0), 0.0, 0.0};
  const auto psi = gaussian_on_grid(g, -8.0, 8.0, 512, kUnit);
  EXPECT_NEAR(transmission_probability(psi, -100.0), psi.norm(), 1e-12);
  EXPECT_EQ(transmission_probability(psi, 100.0), 0.0);
  EXPECT_NEAR(transmission_probability(psi, 7.0), 0.0, 1e-20);
  try {
    transmission_probability(psi, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SplitPointContaminated);
  }
}
