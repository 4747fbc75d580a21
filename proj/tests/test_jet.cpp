#include <gtest/gtest.h>

#include <random>

#include "bomca/jet.hpp"
#include "test_util.hpp"

using namespace bomca;
using bomca::test_util::contour_derivative;
using bomca::test_util::rel_err;

namespace {

void expect_jet(const Jet& j, std::initializer_list<complex> want, double tol = 1e-14) {
  ASSERT_EQ(j.size(), want.size());
  std::size_t k = 0;
  for (complex w : want) {
    EXPECT_NEAR(std::abs(j[k] - w), 0.0, tol) << "coefficient " << k;
    ++k;
  }
}

/// Jet of exp(c x) * x^2 at z (derivatives by Leibniz on the closed form).
complex sample_f(complex c, complex x) { return std::exp(c * x) * x * x; }

Jet sample_jet(complex c, complex z, int order) {
  Jet e(order), p(order);
  for (int k = 0; k <= order; ++k) e[k] = std::pow(c, k) * std::exp(c * z);
  p[0] = z * z;
  if (order >= 1) p[1] = 2.0 * z;
  if (order >= 2) p[2] = 2.0;
  return jet_mul(e, p);
}

}  // namespace

TEST(JetVariable, IdentityDerivatives) {
  expect_jet(jet_variable({2.0, 0.0}, 2), {{2.0, 0.0}, 1.0, 0.0});
  expect_jet(jet_variable(0.0, 0), {0.0});
  expect_jet(jet_variable({1.0, 1.0}, 3), {{1.0, 1.0}, 1.0, 0.0, 0.0});
}

TEST(JetVariable, RejectsBadOrder) {
  EXPECT_THROW(jet_variable(0.0, -1), Error);
  EXPECT_THROW(jet_variable(0.0, kMaxJetOrder + 1), Error);
}

TEST(JetMul, SquareOfIdentity) { expect_jet(jet_mul(Jet{1.0, 1.0, 0.0}, Jet{1.0, 1.0, 0.0}), {1.0, 2.0, 2.0}); }

TEST(JetMul, ConstantScales) {
  const complex c(1.5, -0.5);
  const Jet b{{0.3, 1.0}, 2.0, {-1.0, 4.0}};
  const Jet p = jet_mul(Jet::constant(c, 2), b);
  for (int k = 0; k <= 2; ++k) EXPECT_NEAR(std::abs(p[k] - c * b[k]), 0.0, 1e-15);
}

TEST(JetMul, HandLeibniz) {
  // (fg)'' = f''g + 2f'g' + fg'' = 1 - 6 + 0.
  expect_jet(jet_mul(Jet{2.0, 3.0, 1.0}, Jet{1.0, -1.0, 0.0}), {2.0, 1.0, -5.0});
}

TEST(JetMul, OrderMismatchThrows) {
  try {
    jet_mul(Jet{1.0, 2.0}, Jet{1.0, 2.0, 3.0});
    FAIL() << "expected OrderMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderMismatch);
  }
}

TEST(JetElementary, Examples) {
  expect_jet(jet_cosh(Jet{0.0, 1.0, 0.0}), {1.0, 0.0, 1.0});
  expect_jet(jet_recip(Jet{1.0, 0.0, 0.0}), {1.0, 0.0, 0.0});
  expect_jet(jet_sech2(Jet{0.0, 1.0, 0.0, 0.0}), {1.0, 0.0, -2.0, 0.0});
  expect_jet(jet_exp(Jet{0.0, 1.0, 0.0, 0.0}), {1.0, 1.0, 1.0, 1.0});
  expect_jet(jet_sinh(Jet{0.0, 1.0, 0.0, 0.0}), {0.0, 1.0, 0.0, 1.0});
}

TEST(JetElementary, PoleProximity) {
  try {
    jet_recip(Jet{1e-10, 1.0});
    FAIL() << "expected PoleProximity";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleProximity);
  }
  // cosh vanishes at i pi / 2.
  EXPECT_THROW(jet_sech2(jet_variable({0.0, std::numbers::pi / 2.0}, 2)), Error);
  EXPECT_NO_THROW(jet_sech2(jet_variable({0.0, std::numbers::pi / 2.0 - 1e-3}, 2)));
}

TEST(JetProperty, ProductMatchesContourDifferentiation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + trial % 6;
    const complex ca = test_util::random_complex(rng, -1, 1, -1, 1);
    const complex cb = test_util::random_complex(rng, -1, 1, -1, 1);
    const complex z = test_util::random_complex(rng, -1, 1, -1, 1);
    const Jet prod = jet_mul(sample_jet(ca, z, order), sample_jet(cb, z, order));
    auto h = [&](complex x) { return sample_f(ca, x) * sample_f(cb, x); };
    for (int k = 0; k <= order; ++k)
      EXPECT_LT(rel_err(prod[k], contour_derivative(h, z, k, 0.5)), 1e-6) << "order " << order << " k " << k;
  }
}

TEST(JetProperty, Sech2MatchesContourDifferentiation) {
  std::mt19937_64 rng(11);
  auto sech2 = [](complex x) {
    const complex c = std::cosh(x);
    return 1.0 / (c * c);
  };
  int tested = 0;
  while (tested < 50) {
    const complex z = test_util::random_complex(rng, -2, 2, -1.2, 1.2);
    // Distance to the nearest zero of cosh, at i (pi/2 + n pi).
    const double n = std::round((z.imag() - std::numbers::pi / 2) / std::numbers::pi);
    const double d = std::abs(z - complex(0.0, std::numbers::pi / 2 + n * std::numbers::pi));
    if (d < 0.3) continue;
    ++tested;
    const Jet j = jet_sech2(jet_variable(z, 4));
    for (int k = 0; k <= 4; ++k)
      EXPECT_LT(rel_err(j[k], contour_derivative(sech2, z, k, 0.5 * d)), 1e-6) << "z " << z << " k " << k;
  }
}

TEST(JetProperty, SchwarzReflection) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a(5), b(5);
    for (int k = 0; k <= 5; ++k) {
      a[k] = test_util::random_complex(rng, -1, 1, -0.5, 0.5);
      b[k] = test_util::random_complex(rng, -1, 1, -0.5, 0.5);
    }
    a[0] = test_util::random_complex(rng, 0.2, 1, -0.5, 0.5);
    auto conj = [](Jet j) {
      for (int k = 0; k <= j.order(); ++k) j[k] = std::conj(j[k]);
      return j;
    };
    const auto check = [&](const Jet& f_of_conj, const Jet& f) {
      for (int k = 0; k <= 5; ++k) EXPECT_NEAR(std::abs(f_of_conj[k] - std::conj(f[k])), 0.0, 1e-12 * (1 + std::abs(f[k])));
    };
    check(jet_mul(conj(a), conj(b)), jet_mul(a, b));
    check(jet_exp(conj(a)), jet_exp(a));
    check(jet_cosh(conj(a)), jet_cosh(a));
    check(jet_sinh(conj(a)), jet_sinh(a));
    check(jet_recip(conj(a)), jet_recip(a));
    check(jet_sech2(conj(a)), jet_sech2(a));
  }
}
