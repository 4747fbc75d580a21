#pragma once

// Per-branch wavefunctions psi_j(x_f) = exp(i S_j / hbar), their
// superpositions, and comparison against a reference.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bomca/branch_finder.hpp"
#include "bomca/error.hpp"

namespace bomca {

/// Default log-amplitude ceiling: points with -Im(S)/hbar above it are flagged.
inline constexpr double kDefaultLogAmplitudeCap = 30.0;

enum class PointStatus { Valid, Missing, Overflow, Focal };

constexpr std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Valid: return "valid";
    case PointStatus::Missing: return "missing";
    case PointStatus::Overflow: return "overflow";
    case PointStatus::Focal: return "focal";
  }
  return "unknown";
}

struct BranchWavefunction {
  int branch_id = 0;
  std::vector<double> xf_grid;
  std::vector<complex> psi;  ///< zero where status != Valid
  std::vector<PointStatus> status;

  bool valid(std::size_t k) const { return status[k] == PointStatus::Valid; }
};

/// psi = exp(i S_f / hbar) at every grid point the branch reached.
inline BranchWavefunction branch_psi(const Branch& branch, std::span<const double> xf_grid,
                                     const PhysicalConstants& consts,
                                     double log_amplitude_cap = kDefaultLogAmplitudeCap,
                                     bool include_focal = false) {
  BranchWavefunction w{branch.id, {xf_grid.begin(), xf_grid.end()}, std::vector<complex>(xf_grid.size()),
                       std::vector<PointStatus>(xf_grid.size(), PointStatus::Missing)};
  std::size_t k = 0;
  for (const auto& s : branch.solutions) {
    while (k < xf_grid.size() && xf_grid[k] < s.x_f) ++k;
    if (k == xf_grid.size() || xf_grid[k] != s.x_f)
      throw Error(ErrorKind::GridMismatch, "branch solution off the requested x_f grid");
    if (s.focal && !include_focal) {
      w.status[k] = PointStatus::Focal;
      continue;
    }
    if (-s.S_f.imag() / consts.hbar > log_amplitude_cap) {
      w.status[k] = PointStatus::Overflow;
      continue;
    }
    w.psi[k] = std::exp(complex(0.0, 1.0) * s.S_f / consts.hbar);
    w.status[k] = PointStatus::Valid;
  }
  return w;
}

struct SuperpositionPolicy {
  enum class Mode { Single, Pair, All, Explicit, BestPairPerPoint };
  Mode mode = Mode::Pair;
  std::vector<int> ids;  ///< branch ids for Single (1), Pair (2) and Explicit (any)
  /// Optional |psi| ceiling applied to the superposed value.
  std::optional<double> cap;

  static SuperpositionPolicy single(int j) { return {Mode::Single, {j}, {}}; }
  static SuperpositionPolicy pair(int i, int j) { return {Mode::Pair, {i, j}, {}}; }
  static SuperpositionPolicy all() { return {Mode::All, {}, {}}; }
  static SuperpositionPolicy best_pair_per_point() { return {Mode::BestPairPerPoint, {}, {}}; }

  std::string label() const {
    switch (mode) {
      case Mode::Single: return "single_" + std::to_string(ids.at(0));
      case Mode::Pair: return "pair_" + std::to_string(ids.at(0)) + "_" + std::to_string(ids.at(1));
      case Mode::All: return "all";
      case Mode::Explicit: {
        std::string s = "set";
        for (int id : ids) s += "_" + std::to_string(id);
        return s;
      }
      case Mode::BestPairPerPoint: return "best_pair_per_point";
    }
    return "unknown";
  }

  bool operator==(const SuperpositionPolicy&) const = default;
};

struct Superposition {
  std::vector<double> xf_grid;
  std::vector<complex> psi;
  std::vector<std::uint8_t> valid;  ///< 1 where psi is usable
  /// BestPairPerPoint only: the (i, j) chosen at each point (0, 0 where none).
  std::vector<std::pair<int, int>> chosen;
};

/// Pointwise sum over the selected branches. A point is invalid if any
/// selected branch is invalid there.
///
/// BestPairPerPoint picks, at each point, the valid pair closest to
/// `reference` in |psi|. It needs the reference and is a diagnostic only.
inline Superposition superpose(std::span<const BranchWavefunction> set, const SuperpositionPolicy& policy,
                               std::span<const complex> reference = {}) {
  if (set.empty()) throw Error(ErrorKind::InvalidArgument, "no branch wavefunctions to superpose");
  const auto& grid = set.front().xf_grid;
  for (const auto& b : set)
    if (b.xf_grid != grid) throw Error(ErrorKind::GridMismatch, "branch wavefunctions use different x_f grids");

  auto find = [&](int id) -> const BranchWavefunction& {
    for (const auto& b : set)
      if (b.branch_id == id) return b;
    throw Error(ErrorKind::InvalidArgument, "superposition references unknown branch " + std::to_string(id));
  };

  const std::size_t n = grid.size();
  Superposition out{grid, std::vector<complex>(n), std::vector<std::uint8_t>(n, 0), {}};

  using Mode = SuperpositionPolicy::Mode;
  if (policy.mode == Mode::BestPairPerPoint) {
    if (reference.size() != n) throw Error(ErrorKind::GridMismatch, "best-pair-per-point needs a reference on the grid");
    out.chosen.assign(n, {0, 0});
    for (std::size_t k = 0; k < n; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b) {
          if (!set[a].valid(k) || !set[b].valid(k)) continue;
          const complex z = set[a].psi[k] + set[b].psi[k];
          const double err = std::abs(std::abs(z) - std::abs(reference[k]));
          if (err < best) {
            best = err;
            out.psi[k] = z;
            out.valid[k] = 1;
            out.chosen[k] = {set[a].branch_id, set[b].branch_id};
          }
        }
    }
  } else {
    std::vector<const BranchWavefunction*> chosen;
    switch (policy.mode) {
      case Mode::Single:
        if (policy.ids.size() != 1) throw Error(ErrorKind::InvalidArgument, "single policy needs one branch id");
        break;
      case Mode::Pair:
        if (policy.ids.size() != 2 || policy.ids[0] == policy.ids[1])
          throw Error(ErrorKind::InvalidArgument, "pair policy needs two distinct branch ids");
        break;
      default: break;
    }
    if (policy.mode == Mode::All) {
      for (const auto& b : set) chosen.push_back(&b);
    } else {
      for (int id : policy.ids) chosen.push_back(&find(id));
    }
    for (std::size_t k = 0; k < n; ++k) {
      complex z = 0.0;
      bool ok = true;
      for (const auto* b : chosen) {
        ok = ok && b->valid(k);
        z += b->psi[k];
      }
      out.valid[k] = ok ? 1 : 0;
      out.psi[k] = ok ? z : complex{};
    }
  }
  if (policy.cap) {
    for (std::size_t k = 0; k < n; ++k)
      if (out.valid[k] && std::abs(out.psi[k]) > *policy.cap) {
        out.valid[k] = 0;
        out.psi[k] = 0.0;
      }
  }
  return out;
}

/// Local minima of |psi| (interior, strict on the left), refined by a parabola through three points.
inline std::vector<double> find_minima(std::span<const double> x, std::span<const double> amp) {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < amp.size(); ++k) {
    if (!(amp[k] < amp[k - 1] && amp[k] <= amp[k + 1])) continue;
    const double denom = amp[k - 1] - 2.0 * amp[k] + amp[k + 1];
    double shift = denom > 0.0 ? 0.5 * (amp[k - 1] - amp[k + 1]) / denom : 0.0;
    shift = std::clamp(shift, -1.0, 1.0);
    const double h = shift >= 0.0 ? x[k + 1] - x[k] : x[k] - x[k - 1];
    out.push_back(x[k] + shift * h);
  }
  return out;
}

struct ComparisonMetrics {
  double l2_rel = 0.0;    ///< ||a| - |b||_2 / ||b||_2 over valid points in the region
  double linf_rel = 0.0;  ///< max ||a| - |b|| / max |b|
  std::vector<double> minima_bomca;
  std::vector<double> minima_reference;
  std::size_t n_points = 0;
  std::size_t n_invalid = 0;
};

/// Compares |psi| on grid points with x in [lo, hi].
inline ComparisonMetrics compare(std::span<const double> x, std::span<const complex> psi_bomca,
                                 std::span<const complex> psi_reference, double lo, double hi,
                                 std::span<const std::uint8_t> valid = {}) {
  if (psi_bomca.size() != x.size() || psi_reference.size() != x.size() || (!valid.empty() && valid.size() != x.size()))
    throw Error(ErrorKind::GridMismatch, "comparison inputs differ in length");
  ComparisonMetrics m;
  std::vector<double> xs, a, b;
  double num = 0.0, den = 0.0, worst = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < lo || x[k] > hi) continue;
    ++m.n_points;
    if (!valid.empty() && !valid[k]) {
      ++m.n_invalid;
      continue;
    }
    const double ab = std::abs(psi_bomca[k]), ar = std::abs(psi_reference[k]);
    xs.push_back(x[k]);
    a.push_back(ab);
    b.push_back(ar);
    num += (ab - ar) * (ab - ar);
    den += ar * ar;
    worst = std::max(worst, std::abs(ab - ar));
    peak = std::max(peak, ar);
  }
  if (xs.empty()) throw Error(ErrorKind::EmptyRegion, "no valid grid points in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  m.l2_rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  m.linf_rel = peak > 0.0 ? worst / peak : worst;
  m.minima_bomca = find_minima(xs, a);
  m.minima_reference = find_minima(xs, b);
  return m;
}

/// Largest distance from any reference minimum to the nearest BOMCA minimum
/// (+inf if the reference has minima and BOMCA has none).
inline double minima_mismatch(const ComparisonMetrics& m) {
  double worst = 0.0;
  for (double r : m.minima_reference) {
    double best = std::numeric_limits<double>::infinity();
    for (double q : m.minima_bomca) best = std::min(best, std::abs(q - r));
    worst = std::max(worst, best);
  }
  return worst;
}

struct PairScore {
  int i = 0, j = 0;
  ComparisonMetrics metrics;
};

/// Every branch pair valid throughout [lo, hi], ranked by L2 error against the reference.
inline std::vector<PairScore> rank_pairs(std::span<const BranchWavefunction> set, std::span<const complex> reference,
                                         double lo, double hi) {
  std::vector<PairScore> out;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      const auto sum = superpose(set, SuperpositionPolicy::pair(set[a].branch_id, set[b].branch_id));
      ComparisonMetrics m;
      try {
        m = compare(sum.xf_grid, sum.psi, reference, lo, hi, sum.valid);
      } catch (const Error&) {
        continue;
      }
      if (m.n_invalid > 0) continue;
      out.push_back({set[a].branch_id, set[b].branch_id, std::move(m)});
    }
  std::stable_sort(out.begin(), out.end(),
                   [](const PairScore& p, const PairScore& q) { return p.metrics.l2_rel < q.metrics.l2_rel; });
  return out;
}

}  // namespace bomca
