#include <gtest/gtest.h>

#include "bomca/integrator.hpp"

using namespace bomca;

namespace {

const PhysicalConstants kUnit{1.0, 1.0};
const PotentialSpec kEckart = EckartPotential{40.0, 4.32};

IntegratorConfig tight() {
  IntegratorConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  return c;
}

}  // namespace

TEST(Integrate, ScalarExponential) {
  // dy/dt = i y, so y(t) = e^{i t}.
  auto f = [](double, std::span<const complex> y, std::span<complex> dy) { dy[0] = complex(0, 1) * y[0]; };
  const std::vector<double> w{1.0};
  auto ok = [](double, std::span<const complex>) { return TrajectoryStatus::Ok; };
  const auto r = integrate(f, 0.0, {1.0}, 3.0, w, tight(), ok);
  ASSERT_EQ(r.status, TrajectoryStatus::Ok);
  EXPECT_LT(std::abs(r.y[0] - std::exp(complex(0, 3.0))), 1e-10);
}

TEST(Integrate, LandsExactlyOnFinalTime) {
  auto f = [](double, std::span<const complex>, std::span<complex> dy) { dy[0] = 1.0; };
  const std::vector<double> w{1.0};
  auto ok = [](double, std::span<const complex>) { return TrajectoryStatus::Ok; };
  for (double tf : {0.995, 1.0 / 3.0, 5.5, 1e-3}) {
    const auto r = integrate(f, 0.0, {0.0}, tf, w, IntegratorConfig{}, ok);
    EXPECT_EQ(r.t, tf);
  }
}

TEST(Integrate, RejectsBadInput) {
  auto f = [](double, std::span<const complex>, std::span<complex> dy) { dy[0] = 1.0; };
  auto ok = [](double, std::span<const complex>) { return TrajectoryStatus::Ok; };
  const std::vector<double> w{1.0};
  EXPECT_THROW(integrate(f, 1.0, {0.0}, 1.0, w, IntegratorConfig{}, ok), Error);
  IntegratorConfig bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(integrate(f, 0.0, {0.0}, 1.0, w, bad, ok), Error);
}

TEST(Integrate, MaxSteps) {
  auto f = [](double, std::span<const complex> y, std::span<complex> dy) { dy[0] = complex(0, 50) * y[0]; };
  auto ok = [](double, std::span<const complex>) { return TrajectoryStatus::Ok; };
  const std::vector<double> w{1.0};
  IntegratorConfig c;
  c.max_steps = 10;
  EXPECT_EQ(integrate(f, 0.0, {1.0}, 10.0, w, c, ok).status, TrajectoryStatus::MaxStepsExceeded);
}

TEST(Propagate, FreeFlightExact) {
  const Hierarchy h(FreePotential{}, kUnit, 1);
  const GaussianWavepacket g{complex(3.0, 0.0), -0.2, 2.0};
  const complex x0(0.1, -0.05);
  const auto s0 = initial_state(g, x0, 1, kUnit);
  const double t = 1.5;
  const auto r = propagate(s0, h, t, tight());
  ASSERT_TRUE(r.ok());
  const complex v0 = s0.v[0], v1 = s0.v[1];
  EXPECT_LT(std::abs(r.state.x - (x0 + v0 * t)), 1e-11);
  EXPECT_LT(std::abs(r.state.M - (1.0 + v1 * t)), 1e-11);
  const complex S = s0.S + 0.5 * v0 * v0 * t + complex(0, 0.5) * std::log(1.0 + v1 * t);
  EXPECT_LT(std::abs(r.state.S - S), 1e-10);
  EXPECT_EQ(r.state.t, t);
}

TEST(Propagate, HarmonicAnalytic) {
  const double k = 4.0, w = 2.0;
  const Hierarchy h(HarmonicPotential{k}, kUnit, 1);
  const GaussianWavepacket g{complex(1.0, 0.0), 0.5, 0.0};
  const complex x0(0.3, 0.2);
  const auto s0 = initial_state(g, x0, 1, kUnit);
  const double t = 2.3;
  const auto r = propagate(s0, h, t, tight());
  ASSERT_TRUE(r.ok());
  const complex x = x0 * std::cos(w * t) + s0.v[0] / w * std::sin(w * t);
  EXPECT_LT(std::abs(r.state.x - x), 1e-10);
  EXPECT_LT(std::abs(r.state.v[0] - (-x0 * w * std::sin(w * t) + s0.v[0] * std::cos(w * t))), 1e-9);
}

TEST(Propagate, ToleranceScaling) {
  const Hierarchy h(HarmonicPotential{4.0}, kUnit, 1);
  const GaussianWavepacket g{complex(1.0, 0.0), 0.5, 0.0};
  const complex x0(0.3, 0.2);
  const auto s0 = initial_state(g, x0, 1, kUnit);
  const double t = 2.3;
  const complex exact = x0 * std::cos(2.0 * t) + s0.v[0] / 2.0 * std::sin(2.0 * t);
  double prev = 1.0;
  for (double tol : {1e-5, 1e-8, 1e-11}) {
    IntegratorConfig c;
    c.rel_tol = tol;
    c.abs_tol = tol * 1e-2;
    c.h_max = 1.0;
    const double err = std::abs(propagate(s0, h, t, c).state.x - exact);
    EXPECT_LT(err, prev);
    EXPECT_LT(err, 1e3 * tol);
    prev = err;
  }
}

TEST(Propagate, RealTrajectoryStaysReal) {
  const GaussianWavepacket g{complex(94.24777960769379, 0.0), -0.5, 17.320508075688775};
  const Hierarchy h(kEckart, kUnit, 1);
  const auto r = propagate(initial_state(g, g.x_c, 1, kUnit), h, 0.995, IntegratorConfig{});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.diagnostics.max_abs_im_x, 0.0);
  EXPECT_EQ(r.state.x.imag(), 0.0);
  EXPECT_GT(r.diagnostics.accepted, 0);
}

TEST(Propagate, TimeReversalFirstOrder) {
  // Without the quantum term (N = 1) flipping every v_n retraces the path.
  const GaussianWavepacket g{complex(94.24777960769379, 0.0), -0.5, 17.320508075688775};
  const Hierarchy h(kEckart, kUnit, 1);
  const complex x0(-0.6, 0.01);
  const auto s0 = initial_state(g, x0, 1, kUnit);
  const auto fwd = propagate(s0, h, 0.5, tight());
  ASSERT_TRUE(fwd.ok());
  auto back = fwd.state;
  back.t = 0.0;
  for (auto& v : back.v) v = -v;
  const auto r = propagate(back, h, 0.5, tight());
  ASSERT_TRUE(r.ok());
  EXPECT_LT(std::abs(r.state.x - x0), 1e-8);
  EXPECT_LT(std::abs(r.state.v[0] + s0.v[0]), 1e-6);
}

TEST(Propagate, PoleCaptureIsReported) {
  const GaussianWavepacket g{complex(94.24777960769379, 0.0), -0.5, 17.320508075688775};
  const Hierarchy h(kEckart, kUnit, 1, 0.02);
  const complex near_pole(0.0, std::numbers::pi / (2 * 4.32) - 0.01);
  const auto r = propagate(initial_state(g, near_pole, 1, kUnit), h, 0.5, IntegratorConfig{});
  EXPECT_EQ(r.status, TrajectoryStatus::PoleProximity);
}

TEST(Propagate, OverflowIsReported) {
  // ln|psi(x0)| = alpha * 9 far beyond the overflow threshold.
  const GaussianWavepacket g{complex(94.24777960769379, 0.0), 0.0, 0.0};
  const Hierarchy h(FreePotential{}, kUnit, 1);
  const auto r = propagate(initial_state(g, complex(0.0, 3.0), 1, kUnit), h, 0.5, IntegratorConfig{});
  EXPECT_EQ(r.status, TrajectoryStatus::Overflow);
}
