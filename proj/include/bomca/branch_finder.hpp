#pragma once

// Root finding for complex initial conditions.
//
// For a real target x_f, the map x0 -> x(t_f; x0) is holomorphic, so a
// one-variable complex Newton iteration with the propagated monodromy as
// Jacobian converges quadratically. Seeds from a rectangular lattice find
// the distinct roots at one x_f; continuation along the x_f grid then traces
// each root into a branch.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include "bomca/error.hpp"
#include "bomca/hierarchy.hpp"
#include "bomca/integrator.hpp"
#include "bomca/parallel.hpp"

namespace bomca {

/// Everything needed to run one trajectory from a complex x0 to t_f.
struct TrajectoryModel {
  Hierarchy hierarchy;
  GaussianWavepacket psi0;
  double t_f = 1.0;
  IntegratorConfig integrator;

  double length_scale() const { return 1.0 / std::sqrt(psi0.alpha.real()); }

  PropagationResult run(complex x0) const {
    const auto s0 = initial_state(psi0, x0, hierarchy.truncation(), hierarchy.constants());
    return propagate(s0, hierarchy, t_f, integrator, length_scale());
  }
};

struct NewtonConfig {
  double newton_tol = 1e-9;
  int max_iters = 25;
  double focal_tol = 1e-6;
  /// Largest |dx0| taken in one Newton update; longer steps are scaled back.
  double max_step = 0.1;
  /// Step halvings tried when a Newton update lands on a failing trajectory.
  int max_backtracks = 6;

  bool operator==(const NewtonConfig&) const = default;
};

struct SearchRegion {
  double re_lo = -1.0, re_hi = 1.0;
  double im_lo = -1.0, im_hi = 1.0;
  int n_re = 40, n_im = 40;
  /// Newton iterates may stray this fraction of each extent outside the box.
  double margin = 0.1;

  void validate() const {
    if (!(re_lo < re_hi) || !(im_lo < im_hi)) throw Error(ErrorKind::InvalidArgument, "search region is empty");
    if (n_re < 2 || n_im < 2) throw Error(ErrorKind::InvalidArgument, "seed lattice must be at least 2x2");
    if (!(margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "region margin must be >= 0");
  }

  bool contains(complex z, bool with_margin = true) const {
    const double mr = with_margin ? margin * (re_hi - re_lo) : 0.0;
    const double mi = with_margin ? margin * (im_hi - im_lo) : 0.0;
    return z.real() >= re_lo - mr && z.real() <= re_hi + mr && z.imag() >= im_lo - mi && z.imag() <= im_hi + mi;
  }

  /// Lattice seeds in row-major order (imaginary index outer).
  std::vector<complex> seeds() const {
    std::vector<complex> out;
    out.reserve(static_cast<std::size_t>(n_re) * n_im);
    for (int j = 0; j < n_im; ++j) {
      const double im = im_lo + (im_hi - im_lo) * j / (n_im - 1);
      for (int i = 0; i < n_re; ++i) out.emplace_back(re_lo + (re_hi - re_lo) * i / (n_re - 1), im);
    }
    return out;
  }

  bool operator==(const SearchRegion&) const = default;
};

struct RootSolution {
  complex x0;
  double x_f = 0.0;
  complex S_f;
  complex M_f;
  double residual = 0.0;
  int newton_iters = 0;
  double min_pole_distance = std::numeric_limits<double>::infinity();
  double max_path_imag = 0.0;  ///< max |Im x(t)| along the trajectory; 0 for a real trajectory
  bool focal = false;  ///< |M_f| < focal_tol: caustic, excluded from reconstruction by default
};

enum class NewtonStatus { Converged, NoConvergence, LeftRegion, DegenerateJacobian, TrajectoryFailed };

constexpr std::string_view to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::Converged: return "converged";
    case NewtonStatus::NoConvergence: return "NoConvergence";
    case NewtonStatus::LeftRegion: return "LeftRegion";
    case NewtonStatus::DegenerateJacobian: return "DegenerateJacobian";
    case NewtonStatus::TrajectoryFailed: return "TrajectoryFailed";
  }
  return "unknown";
}

struct NewtonOutcome {
  NewtonStatus status = NewtonStatus::NoConvergence;
  RootSolution root;  ///< converged root, or the last iterate on failure
  TrajectoryStatus trajectory_status = TrajectoryStatus::Ok;

  bool converged() const { return status == NewtonStatus::Converged; }
};

/// Complex Newton iteration x0 <- x0 - (x(t_f; x0) - x_f) / M_f(x0).
inline NewtonOutcome newton_solve(const TrajectoryModel& model, complex guess, double x_f,
                                  const SearchRegion& region, const NewtonConfig& cfg = {}) {
  NewtonOutcome out;
  out.root.x_f = x_f;
  out.root.x0 = guess;

  complex x0 = guess;
  auto r = model.run(x0);
  if (!r.ok()) {
    out.status = NewtonStatus::TrajectoryFailed;
    out.trajectory_status = r.status;
    return out;
  }

  for (int it = 0;; ++it) {
    const complex f = r.state.x - x_f;
    const complex M = r.state.M;
    out.root = RootSolution{x0, x_f, r.state.S, M, std::abs(f), it, r.diagnostics.min_pole_distance,
                            r.diagnostics.max_abs_im_x, false};
    if (out.root.residual < cfg.newton_tol) {
      out.root.focal = std::abs(M) < cfg.focal_tol;
      out.status = NewtonStatus::Converged;
      return out;
    }
    if (it >= cfg.max_iters) {
      out.status = NewtonStatus::NoConvergence;
      return out;
    }
    if (std::abs(M) < cfg.focal_tol) {
      out.status = NewtonStatus::DegenerateJacobian;
      return out;
    }
    complex step = f / M;
    if (std::abs(step) > cfg.max_step) step *= cfg.max_step / std::abs(step);

    bool moved = false;
    for (int b = 0; b <= cfg.max_backtracks; ++b, step *= 0.5) {
      const complex trial = x0 - step;
      if (!region.contains(trial)) {
        out.status = NewtonStatus::LeftRegion;
        out.root.x0 = trial;
        return out;
      }
      auto rt = model.run(trial);
      if (rt.ok()) {
        x0 = trial;
        r = std::move(rt);
        moved = true;
        break;
      }
      out.trajectory_status = rt.status;
    }
    if (!moved) {
      out.status = NewtonStatus::TrajectoryFailed;
      return out;
    }
  }
}

struct ScanDiagnostics {
  std::map<std::string, int> outcome_counts;  ///< NewtonStatus name -> count over seeds
  int converged = 0;
};

struct ScanResult {
  std::vector<RootSolution> roots;  ///< deduplicated, sorted by (Re x0, Im x0)
  ScanDiagnostics diagnostics;
};

/// Newton from every lattice seed; converged roots closer than dedup_tol are merged.
inline ScanResult seed_scan(const TrajectoryModel& model, const SearchRegion& region, double x_f,
                            const NewtonConfig& cfg = {}, double dedup_tol = 1e-5,
                            unsigned threads = 1) {
  region.validate();
  const auto seeds = region.seeds();
  std::vector<NewtonOutcome> outcomes(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) { outcomes[i] = newton_solve(model, seeds[i], x_f, region, cfg); });

  ScanResult result;
  for (const auto& o : outcomes) {
    ++result.diagnostics.outcome_counts[std::string(to_string(o.status))];
    if (!o.converged()) continue;
    // Roots found only by straying into the margin are outside the search box.
    if (!region.contains(o.root.x0, false)) continue;
    ++result.diagnostics.converged;
    auto dup = std::find_if(result.roots.begin(), result.roots.end(),
                            [&](const RootSolution& r) { return std::abs(r.x0 - o.root.x0) < dedup_tol; });
    if (dup == result.roots.end())
      result.roots.push_back(o.root);
    else if (o.root.residual < dup->residual)
      *dup = o.root;
  }
  std::sort(result.roots.begin(), result.roots.end(), [](const RootSolution& a, const RootSolution& b) {
    if (a.x0.real() != b.x0.real()) return a.x0.real() < b.x0.real();
    return a.x0.imag() < b.x0.imag();
  });
  return result;
}

struct ContinuationConfig {
  /// A corrector move larger than this multiple of the predictor step is a jump to another root.
  double jump_tol = 0.5;
  /// Maximum recursive halvings of an x_f step before the branch is truncated.
  int max_substep_depth = 8;

  bool operator==(const ContinuationConfig&) const = default;
};

struct Branch {
  int id = 0;
  complex seed;
  std::vector<RootSolution> solutions;  ///< strictly increasing x_f
  std::string truncated_low;            ///< why continuation stopped toward smaller x_f ("" if it reached the grid end)
  std::string truncated_high;
  std::vector<RootSolution> axis_crossings;  ///< roots with Im(x0) = 0 where the locus crosses the real axis

  bool covers(std::size_t grid_size) const { return solutions.size() == grid_size; }
  const RootSolution* at(double x_f) const {
    for (const auto& s : solutions)
      if (s.x_f == x_f) return &s;
    return nullptr;
  }
};

namespace detail {

// One continuation step from `prev` to x_f, halving the step when Newton
// fails or jumps. Returns the root at x_f or the failure reason.
inline NewtonOutcome continuation_step(const TrajectoryModel& model, const RootSolution& prev, double x_f,
                                       const SearchRegion& region, const NewtonConfig& ncfg,
                                       const ContinuationConfig& ccfg, int depth) {
  const complex predictor = (x_f - prev.x_f) / prev.M_f;
  NewtonOutcome o = newton_solve(model, prev.x0 + predictor, x_f, region, ncfg);
  if (o.converged()) {
    const double move = std::abs(o.root.x0 - (prev.x0 + predictor));
    if (move <= ccfg.jump_tol * std::abs(predictor) + 10.0 * ncfg.newton_tol) return o;
    o.status = NewtonStatus::NoConvergence;  // converged, but onto a different root
  }
  if (depth >= ccfg.max_substep_depth) return o;
  const double mid = 0.5 * (prev.x_f + x_f);
  NewtonOutcome half = continuation_step(model, prev, mid, region, ncfg, ccfg, depth + 1);
  if (!half.converged()) return half;
  return continuation_step(model, half.root, x_f, region, ncfg, ccfg, depth + 1);
}

}  // namespace detail

/// Locates the point where the branch locus crosses the real x0 axis between
/// solutions a and b (Im x0 changes sign), by Newton iteration in x_f.
inline std::optional<RootSolution> refine_axis_crossing(const TrajectoryModel& model, const RootSolution& a,
                                                        const RootSolution& b, const SearchRegion& region,
                                                        const NewtonConfig& cfg = {}, double im_tol = 1e-12) {
  // Linear interpolation for the first guess.
  const double wa = b.x0.imag() / (b.x0.imag() - a.x0.imag());
  double x_f = wa * a.x_f + (1.0 - wa) * b.x_f;
  RootSolution cur = std::abs(a.x0.imag()) < std::abs(b.x0.imag()) ? a : b;
  for (int it = 0; it < 30; ++it) {
    const complex guess = cur.x0 + (x_f - cur.x_f) / cur.M_f;
    const auto o = newton_solve(model, guess, x_f, region, cfg);
    if (!o.converged()) return std::nullopt;
    cur = o.root;
    if (std::abs(cur.x0.imag()) < im_tol) return cur;
    // d x0 / d x_f = 1 / M along the branch.
    const double slope = (1.0 / cur.M_f).imag();
    if (slope == 0.0) return std::nullopt;
    x_f = cur.x_f - cur.x0.imag() / slope;
    if (x_f < std::min(a.x_f, b.x_f) - std::abs(b.x_f - a.x_f) || x_f > std::max(a.x_f, b.x_f) + std::abs(b.x_f - a.x_f))
      return std::nullopt;
  }
  return std::abs(cur.x0.imag()) < 1e-8 ? std::optional<RootSolution>(cur) : std::nullopt;
}

/// Traces a root along the x_f grid in both directions from its founding point.
inline Branch continue_branch(const TrajectoryModel& model, const RootSolution& founding,
                              std::span<const double> xf_grid, const SearchRegion& region,
                              const NewtonConfig& ncfg = {}, const ContinuationConfig& ccfg = {}) {
  auto it = std::find(xf_grid.begin(), xf_grid.end(), founding.x_f);
  if (it == xf_grid.end()) throw Error(ErrorKind::InvalidArgument, "founding x_f is not a grid point");
  const std::ptrdiff_t k0 = it - xf_grid.begin();

  Branch br;
  br.seed = founding.x0;
  std::vector<RootSolution> upward{founding}, downward;

  RootSolution prev = founding;
  for (std::ptrdiff_t k = k0 + 1; k < static_cast<std::ptrdiff_t>(xf_grid.size()); ++k) {
    auto o = detail::continuation_step(model, prev, xf_grid[k], region, ncfg, ccfg, 0);
    if (!o.converged()) {
      br.truncated_high = std::string(to_string(o.status));
      break;
    }
    upward.push_back(o.root);
    prev = o.root;
  }
  prev = founding;
  for (std::ptrdiff_t k = k0 - 1; k >= 0; --k) {
    auto o = detail::continuation_step(model, prev, xf_grid[k], region, ncfg, ccfg, 0);
    if (!o.converged()) {
      br.truncated_low = std::string(to_string(o.status));
      break;
    }
    downward.push_back(o.root);
    prev = o.root;
  }
  br.solutions.assign(downward.rbegin(), downward.rend());
  br.solutions.insert(br.solutions.end(), upward.begin(), upward.end());

  for (std::size_t k = 0; k + 1 < br.solutions.size(); ++k) {
    const auto& a = br.solutions[k];
    const auto& b = br.solutions[k + 1];
    if (a.x0.imag() == 0.0) {
      br.axis_crossings.push_back(a);
    } else if (b.x0.imag() != 0.0 && (a.x0.imag() < 0.0) != (b.x0.imag() < 0.0)) {
      if (auto c = refine_axis_crossing(model, a, b, region, ncfg)) br.axis_crossings.push_back(*c);
    }
  }
  return br;
}

enum class BranchKind { Real, Secondary };

constexpr std::string_view to_string(BranchKind k) { return k == BranchKind::Real ? "real" : "secondary"; }

struct BranchLabel {
  int branch_id = 0;
  BranchKind kind = BranchKind::Secondary;
  int rank = 0;  ///< order among secondary branches by mean |Im x0| (0 for real branches)
  double min_abs_im_x0 = 0.0;
  double mean_abs_im_x0 = 0.0;
  std::optional<RootSolution> real_trajectory;  ///< the solution that makes the branch real
};

/// A branch is real if it contains a trajectory that stays on the real axis:
/// |Im x0| < real_tol and max_t |Im x(t)| < real_tol. Candidates are the grid
/// solutions and the refined axis crossings. A locus can cross the real x0
/// axis with a complex initial velocity; such a crossing does not count.
inline std::vector<BranchLabel> classify_branches(std::span<const Branch> branches, double real_tol = 1e-4) {
  std::vector<BranchLabel> labels;
  for (const auto& b : branches) {
    BranchLabel l;
    l.branch_id = b.id;
    double mn = std::numeric_limits<double>::infinity(), sum = 0.0;
    for (const auto& s : b.solutions) {
      mn = std::min(mn, std::abs(s.x0.imag()));
      sum += std::abs(s.x0.imag());
    }
    for (const auto& c : b.axis_crossings) mn = std::min(mn, std::abs(c.x0.imag()));
    l.min_abs_im_x0 = mn;
    l.mean_abs_im_x0 = b.solutions.empty() ? 0.0 : sum / static_cast<double>(b.solutions.size());
    auto consider = [&](const RootSolution& s) {
      if (std::abs(s.x0.imag()) < real_tol && s.max_path_imag < real_tol &&
          (!l.real_trajectory || s.max_path_imag < l.real_trajectory->max_path_imag))
        l.real_trajectory = s;
    };
    for (const auto& s : b.solutions) consider(s);
    for (const auto& c : b.axis_crossings) consider(c);
    l.kind = l.real_trajectory ? BranchKind::Real : BranchKind::Secondary;
    labels.push_back(std::move(l));
  }
  std::vector<BranchLabel*> secondary;
  for (auto& l : labels)
    if (l.kind == BranchKind::Secondary) secondary.push_back(&l);
  std::stable_sort(secondary.begin(), secondary.end(),
                   [](const BranchLabel* a, const BranchLabel* b) { return a->mean_abs_im_x0 < b->mean_abs_im_x0; });
  for (std::size_t r = 0; r < secondary.size(); ++r) secondary[r]->rank = static_cast<int>(r) + 1;
  return labels;
}

struct BranchSearchConfig {
  SearchRegion region;
  NewtonConfig newton;
  ContinuationConfig continuation;
  double dedup_tol = 1e-5;
  /// Grid indices at which seed scans are run; roots not already on a branch found there start new branches.
  std::vector<std::size_t> scan_indices;
};

struct BranchSearchResult {
  std::vector<Branch> branches;  ///< ids assigned 1.. in canonical order
  std::vector<ScanResult> scans;
};

/// Seed scans at the configured grid points followed by continuation of every new root.
inline BranchSearchResult find_branches(const TrajectoryModel& model, std::span<const double> xf_grid,
                                        const BranchSearchConfig& cfg, unsigned threads = 1) {
  if (xf_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty x_f grid");
  for (std::size_t k = 1; k < xf_grid.size(); ++k)
    if (!(xf_grid[k] > xf_grid[k - 1])) throw Error(ErrorKind::InvalidArgument, "x_f grid must be strictly increasing");
  std::vector<std::size_t> scan_at = cfg.scan_indices;
  if (scan_at.empty()) scan_at.push_back(xf_grid.size() / 2);

  BranchSearchResult out;
  for (std::size_t idx : scan_at) {
    if (idx >= xf_grid.size()) throw Error(ErrorKind::InvalidArgument, "scan index outside x_f grid");
    const double x_f = xf_grid[idx];
    auto scan = seed_scan(model, cfg.region, x_f, cfg.newton, cfg.dedup_tol, threads);

    std::vector<RootSolution> fresh;
    for (const auto& root : scan.roots) {
      const bool known = std::any_of(out.branches.begin(), out.branches.end(), [&](const Branch& b) {
        const auto* s = b.at(x_f);
        return s && std::abs(s->x0 - root.x0) < cfg.dedup_tol;
      });
      if (!known) fresh.push_back(root);
    }
    std::vector<Branch> traced(fresh.size());
    parallel_for(fresh.size(), threads, [&](std::size_t i) {
      traced[i] = continue_branch(model, fresh[i], xf_grid, cfg.region, cfg.newton, cfg.continuation);
    });
    for (auto& b : traced) {
      // Two fresh roots may trace the same locus only if continuation jumped; keep the first.
      const bool dup = std::any_of(out.branches.begin(), out.branches.end(), [&](const Branch& e) {
        for (const auto& s : b.solutions)
          if (const auto* t = e.at(s.x_f); t && std::abs(t->x0 - s.x0) < cfg.dedup_tol) return true;
        return false;
      });
      if (!dup) out.branches.push_back(std::move(b));
    }
    out.scans.push_back(std::move(scan));
  }
  for (std::size_t i = 0; i < out.branches.size(); ++i) out.branches[i].id = static_cast<int>(i) + 1;
  return out;
}

}  // namespace bomca
