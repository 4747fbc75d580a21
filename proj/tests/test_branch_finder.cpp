#include <gtest/gtest.h>

#include "bomca/branch_finder.hpp"

using namespace bomca;

namespace {

const PhysicalConstants kPhys{30.0, 1.0};
const GaussianWavepacket kPacket{complex(94.24777960769379, 0.0), -0.7, 17.320508075688775};

TrajectoryModel free_model(double t_f = 1.0) {
  return TrajectoryModel{Hierarchy(FreePotential{}, kPhys, 1), kPacket, t_f, IntegratorConfig{}};
}

/// Free flight: x_f = x0 + v0(x0) t is linear in x0.
complex free_root(double x_f, double t) {
  const complex a = complex(0.0, 2.0) * kPacket.alpha * t / kPhys.mass;
  return (x_f - kPacket.p_c * t / kPhys.mass + a * kPacket.x_c) / (1.0 + a);
}

SearchRegion free_region() {
  SearchRegion r;
  r.re_lo = -1.5;
  r.re_hi = 0.5;
  r.im_lo = -1.0;
  r.im_hi = 1.0;
  r.n_re = r.n_im = 5;
  return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

}  // namespace

TEST(Newton, FreeRootInOneUpdate) {
  const auto m = free_model();
  NewtonConfig undamped;
  undamped.max_step = 10.0;
  const auto o = newton_solve(m, complex(0.2, 0.3), 0.4, free_region(), undamped);
  ASSERT_TRUE(o.converged());
  EXPECT_LT(std::abs(o.root.x0 - free_root(0.4, 1.0)), 1e-10);
  EXPECT_LE(o.root.newton_iters, 2);
  EXPECT_LT(o.root.residual, 1e-9);
  EXPECT_FALSE(o.root.focal);
}

TEST(Newton, LeavingRegionIsReported) {
  const auto m = free_model();
  SearchRegion tiny = free_region();
  tiny.re_lo = 0.4;
  tiny.re_hi = 0.5;
  tiny.im_lo = -0.05;
  tiny.im_hi = 0.05;
  tiny.margin = 0.0;
  EXPECT_EQ(newton_solve(m, complex(0.45, 0.0), 0.4, tiny).status, NewtonStatus::LeftRegion);
}

TEST(SeedScan, FreeHasOneRoot) {
  const auto scan = seed_scan(free_model(), free_region(), 0.0);
  ASSERT_EQ(scan.roots.size(), 1u);
  EXPECT_LT(std::abs(scan.roots[0].x0 - free_root(0.0, 1.0)), 1e-9);
}

TEST(SeedScan, ThreadCountDoesNotChangeResult) {
  const auto a = seed_scan(free_model(), free_region(), 0.0, {}, 1e-5, 1);
  const auto b = seed_scan(free_model(), free_region(), 0.0, {}, 1e-5, 3);
  ASSERT_EQ(a.roots.size(), b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) EXPECT_EQ(a.roots[i].x0, b.roots[i].x0);
}

TEST(SearchRegionTest, SeedsAndContains) {
  SearchRegion r = free_region();
  EXPECT_EQ(r.seeds().size(), 25u);
  EXPECT_TRUE(r.contains(complex(0.55, 0.0)));
  EXPECT_FALSE(r.contains(complex(0.55, 0.0), false));
  r.n_re = 0;
  EXPECT_THROW(r.validate(), Error);
}

TEST(Continuation, FreeLocusIsStraight) {
  const auto m = free_model();
  const auto grid = linspace(-2.0, 2.0, 41);
  BranchSearchConfig cfg;
  cfg.region = free_region();
  cfg.scan_indices = {20};
  const auto res = find_branches(m, grid, cfg);
  ASSERT_EQ(res.branches.size(), 1u);
  const auto& b = res.branches[0];
  ASSERT_TRUE(b.covers(grid.size()));
  const complex d = b.solutions.back().x0 - b.solutions.front().x0;
  for (const auto& s : b.solutions) {
    EXPECT_LT(std::abs(s.x0 - free_root(s.x_f, 1.0)), 1e-9);
    const complex rel = (s.x0 - b.solutions.front().x0) / d;
    EXPECT_LT(std::abs(rel.imag()), 1e-9);
    EXPECT_LT(s.residual, 1e-9);
  }
}

TEST(Continuation, RepeatedScansDoNotDuplicate) {
  const auto grid = linspace(-2.0, 2.0, 41);
  BranchSearchConfig cfg;
  cfg.region = free_region();
  cfg.scan_indices = {5, 20, 35};
  EXPECT_EQ(find_branches(free_model(), grid, cfg).branches.size(), 1u);
}

TEST(Continuation, SinglePointGrid) {
  const std::vector<double> grid{0.3};
  BranchSearchConfig cfg;
  cfg.region = free_region();
  const auto res = find_branches(free_model(), grid, cfg);
  ASSERT_EQ(res.branches.size(), 1u);
  EXPECT_EQ(res.branches[0].solutions.size(), 1u);
}

TEST(Continuation, RejectsBadGrid) {
  BranchSearchConfig cfg;
  cfg.region = free_region();
  EXPECT_THROW(find_branches(free_model(), std::vector<double>{}, cfg), Error);
  EXPECT_THROW(find_branches(free_model(), std::vector<double>{0.0, 0.0}, cfg), Error);
}

TEST(Classify, Empty) { EXPECT_TRUE(classify_branches({}).empty()); }

TEST(Classify, RealOnlyWhenLocusTouchesAxis) {
  // The free locus reaches Im x0 = 0 only at x0 = x_c.
  const double x_cross = kPacket.x_c + kPacket.p_c / kPhys.mass;
  BranchSearchConfig cfg;
  cfg.region = free_region();

  const auto wide = linspace(-2.0, 2.0, 41);
  auto res = find_branches(free_model(), wide, cfg);
  auto labels = classify_branches(res.branches);
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].kind, BranchKind::Real);
  ASSERT_FALSE(res.branches[0].axis_crossings.empty());
  EXPECT_NEAR(res.branches[0].axis_crossings[0].x_f, x_cross, 1e-6);
  EXPECT_NEAR(res.branches[0].axis_crossings[0].x0.real(), kPacket.x_c, 1e-6);

  const auto right = linspace(0.5, 1.5, 11);
  res = find_branches(free_model(), right, cfg);
  labels = classify_branches(res.branches);
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].kind, BranchKind::Secondary);
}

TEST(Continuation, EckartRootLocusIsContinuous) {
  // Halving the grid spacing roughly halves the largest x0 jump between neighbours.
  const PhysicalConstants phys{1.0, 1.0};
  const GaussianWavepacket g{complex(94.24777960769379, 0.0), -0.5, 17.320508075688775};
  const TrajectoryModel m{Hierarchy(EckartPotential{40.0, 4.32}, phys, 1), g, 0.4, IntegratorConfig{}};
  SearchRegion region;
  region.re_lo = -1.0;
  region.re_hi = 0.0;
  region.im_lo = -0.3;
  region.im_hi = 0.3;
  const auto root = newton_solve(m, g.x_c, 6.0, region);
  ASSERT_TRUE(root.converged());
  auto max_jump = [&](int n) {
    auto grid = linspace(5.9, 6.1, n);
    auto founding = newton_solve(m, root.root.x0, grid[n / 2], region).root;
    const auto b = continue_branch(m, founding, grid, region);
    EXPECT_TRUE(b.covers(grid.size()));
    double j = 0.0;
    for (std::size_t k = 1; k < b.solutions.size(); ++k) j = std::max(j, std::abs(b.solutions[k].x0 - b.solutions[k - 1].x0));
    return j;
  };
  const double ratio = max_jump(21) / max_jump(11);
  EXPECT_LT(ratio, 0.6);
  EXPECT_GT(ratio, 0.4);
}
