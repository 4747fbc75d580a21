#pragma once

// End-to-end experiment: reference propagation, branch search, per-branch
// wavefunctions, superpositions, comparison and report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bomca/analytic.hpp"
#include "bomca/branch_finder.hpp"
#include "bomca/config.hpp"
#include "bomca/reconstruction.hpp"
#include "bomca/reference_qm.hpp"

namespace bomca {

struct RunOptions {
  unsigned threads = 1;
  std::function<void(const std::string&)> log;  ///< progress messages; may be empty
};

/// Reference wavefunction at t = 0 and t_f on the oracle grid, and at t_f on the x_f grid.
struct OracleResult {
  std::string method;
  GridWavefunction initial;
  GridWavefunction final_state;
  std::vector<complex> on_xf_grid;
  double norm_drift = 0.0;
  double seconds = 0.0;
};

enum class Census { Contributing, Negligible };

constexpr std::string_view to_string(Census c) { return c == Census::Contributing ? "contributing" : "negligible"; }

struct SumResult {
  PolicySpec spec;
  std::string label;
  std::optional<Superposition> sum;
  std::vector<int> members;  ///< branch ids summed (empty for best_pair_per_point)
  std::string error;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> xf_grid;
  std::optional<OracleResult> oracle;
  std::optional<QuantumPotentialField> q_initial;
  std::optional<QuantumPotentialField> q_final;
  BranchSearchResult search;
  std::vector<BranchLabel> labels;
  std::vector<Census> census;
  std::vector<double> peak_log_amplitude;  ///< per branch, max -Im S / hbar over its solutions
  std::vector<BranchWavefunction> psi;
  std::vector<SumResult> sums;
  json report;
  std::vector<std::string> warnings;
  double search_seconds = 0.0;
  double total_seconds = 0.0;

  std::size_t contributing_count() const {
    return static_cast<std::size_t>(std::count(census.begin(), census.end(), Census::Contributing));
  }
};

/// Runs the reference propagator selected by the config.
inline OracleResult run_oracle(const ExperimentConfig& c, std::span<const double> xf_grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& o = c.oracle;
  OracleResult r;
  r.method = detail::method_name(o.method);
  const auto n = static_cast<std::size_t>(o.points);
  if (o.method == OracleSettings::Method::SplitOperator) {
    r.initial = gaussian_on_grid(c.initial, o.x_min, o.x_max, n, c.constants, o.edge_tol);
    SplitOperatorOptions opts;
    opts.edge_tol = o.edge_tol;
    r.final_state = split_operator_propagate(r.initial, c.potential, c.t_final, o.steps, c.constants, opts);
    r.norm_drift = std::abs(r.final_state.norm() - r.initial.norm()) / r.initial.norm();
    r.on_xf_grid = SpectralInterpolant(r.final_state)(xf_grid);
  } else if (o.method == OracleSettings::Method::Analytic) {
    auto exact = [&](double x, double t) {
      if (const auto* h = std::get_if<HarmonicPotential>(&c.potential.variant()))
        return analytic::harmonic_gaussian(c.initial, c.constants, h->k, x, t);
      return analytic::free_gaussian(c.initial, c.constants, x, t);
    };
    r.initial = GridWavefunction::sample(o.x_min, o.x_max, n, [&](double x) { return c.initial.value(x, c.constants.hbar); });
    r.final_state = GridWavefunction::sample(o.x_min, o.x_max, n, [&](double x) { return exact(x, c.t_final); });
    r.on_xf_grid.resize(xf_grid.size());
    for (std::size_t k = 0; k < xf_grid.size(); ++k) r.on_xf_grid[k] = exact(xf_grid[k], c.t_final);
  } else {
    throw Error(ErrorKind::InvalidArgument, "no oracle configured");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline TrajectoryModel make_model(const ExperimentConfig& c) {
  return TrajectoryModel{Hierarchy(c.potential, c.constants, c.truncation, c.pole_clearance), c.initial, c.t_final,
                         c.integrator};
}

/// Grid index closest to x.
inline std::size_t nearest_index(std::span<const double> grid, double x) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (std::abs(grid[k] - x) < std::abs(grid[best] - x)) best = k;
  return best;
}

inline constexpr double kBulkAmplitudeFraction = 1e-3;

/// Peak |psi(x, 0)| of the initial Gaussian.
inline double initial_peak(const ExperimentConfig& c) { return std::abs(std::exp(c.initial.log_norm())); }

/// Negligible: the branch never rises above contribution_floor times the initial peak.
inline Census classify_contribution(double peak_log_amplitude, const ExperimentConfig& c) {
  const double floor = c.reconstruction.contribution_floor * initial_peak(c);
  if (floor > 0.0 && peak_log_amplitude < std::log(floor)) return Census::Negligible;
  return Census::Contributing;
}

namespace detail {

inline double trapezoid_probability(std::span<const double> x, std::span<const complex> psi,
                                    std::span<const std::uint8_t> valid, double x_split) {
  double p = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (x[k] <= x_split || !valid[k] || !valid[k + 1]) continue;
    p += 0.5 * (std::norm(psi[k]) + std::norm(psi[k + 1])) * (x[k + 1] - x[k]);
  }
  return p;
}

inline json minima_json(const ComparisonMetrics& m, double cell) {
  const double mis = minima_mismatch(m);
  return {{"minima_oracle", m.minima_reference},
          {"minima_bomca", m.minima_bomca},
          {"minima_max_offset", std::isfinite(mis) ? json(mis) : json("inf")},
          {"minima_max_offset_cells", std::isfinite(mis) ? json(mis / cell) : json("inf")}};
}

inline json metrics_json(const ComparisonMetrics& m, double cell) {
  json j{{"l2_rel", m.l2_rel}, {"linf_rel", m.linf_rel}, {"n_points", m.n_points}, {"n_invalid", m.n_invalid}};
  j.update(minima_json(m, cell));
  return j;
}

}  // namespace detail

/// Runs the full pipeline. Module failures on individual items become
/// warnings; only configuration errors and a failed branch search throw.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg);
  auto log = [&](const std::string& s) {
    if (opts.log) opts.log(s);
  };
  ExperimentResult R;
  R.config = cfg;
  R.xf_grid = cfg.xf_grid.points();
  const auto& grid = R.xf_grid;
  const double cell = grid[1] - grid[0];
  json report;
  report["name"] = cfg.name;

  // Reference.
  json oracle_json;
  if (cfg.oracle.method != OracleSettings::Method::None) {
    log("oracle: " + detail::method_name(cfg.oracle.method));
    try {
      R.oracle = run_oracle(cfg, grid);
      R.q_initial = quantum_potential(R.oracle->initial, cfg.constants);
      R.q_final = quantum_potential(R.oracle->final_state, cfg.constants);
      oracle_json = {{"method", R.oracle->method},
                     {"x_min", cfg.oracle.x_min},
                     {"x_max", cfg.oracle.x_max},
                     {"points", cfg.oracle.points},
                     {"steps", cfg.oracle.steps},
                     {"norm_initial", R.oracle->initial.norm()},
                     {"norm_final", R.oracle->final_state.norm()},
                     {"norm_drift", R.oracle->norm_drift},
                     {"edge_amplitude_final", R.oracle->final_state.edge_amplitude()},
                     {"files", {"psi_exact.csv", "oracle_grid.csv", "qpotential.csv"}}};
    } catch (const Error& e) {
      R.warnings.push_back(std::string("oracle failed: ") + e.what());
      oracle_json = {{"method", detail::method_name(cfg.oracle.method)}, {"error", e.what()}};
    }
  } else {
    oracle_json = {{"method", "none"}};
  }
  report["oracle"] = oracle_json;

  // Branches.
  const auto model = make_model(cfg);
  BranchSearchConfig bcfg;
  bcfg.region = cfg.search.region;
  bcfg.newton = cfg.search.newton;
  bcfg.continuation = cfg.search.continuation;
  bcfg.dedup_tol = cfg.search.dedup_tol;
  for (double x : cfg.search.scan_at) bcfg.scan_indices.push_back(nearest_index(grid, x));
  log("branch search: " + std::to_string(cfg.search.region.n_re * cfg.search.region.n_im) + " seeds, " +
      std::to_string(grid.size()) + " grid points");
  const auto t_search = std::chrono::steady_clock::now();
  R.search = find_branches(model, grid, bcfg, opts.threads);
  R.search_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_search).count();
  R.labels = classify_branches(R.search.branches, cfg.search.real_branch_tol);

  // Census and per-branch wavefunctions.
  json inventory = json::array();
  std::vector<BranchWavefunction> contributing;
  int n_real = 0;
  for (std::size_t i = 0; i < R.search.branches.size(); ++i) {
    const auto& b = R.search.branches[i];
    const auto& l = R.labels[i];
    double peak = -std::numeric_limits<double>::infinity();
    int max_iters = 0, focal = 0;
    double max_res = 0.0, min_pole = std::numeric_limits<double>::infinity();
    for (const auto& s : b.solutions) {
      peak = std::max(peak, -s.S_f.imag() / cfg.constants.hbar);
      max_iters = std::max(max_iters, s.newton_iters);
      max_res = std::max(max_res, s.residual);
      min_pole = std::min(min_pole, s.min_pole_distance);
      focal += s.focal ? 1 : 0;
    }
    R.peak_log_amplitude.push_back(peak);
    R.census.push_back(classify_contribution(peak, cfg));
    R.psi.push_back(branch_psi(b, grid, cfg.constants, cfg.reconstruction.log_amplitude_cap,
                               cfg.reconstruction.include_focal));
    if (R.census.back() == Census::Contributing) contributing.push_back(R.psi.back());
    if (l.kind == BranchKind::Real) ++n_real;

    json crossings = json::array();
    for (const auto& c : b.axis_crossings)
      crossings.push_back({{"x_f", c.x_f}, {"x0_re", c.x0.real()}, {"x0_im", c.x0.imag()},
                           {"max_path_imag", c.max_path_imag}});
    const auto& w = R.psi.back();
    std::size_t n_valid = 0, n_over = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      n_valid += w.valid(k) ? 1 : 0;
      n_over += w.status[k] == PointStatus::Overflow ? 1 : 0;
    }
    inventory.push_back({{"id", b.id},
                         {"label", to_string(l.kind)},
                         {"rank", l.rank},
                         {"census", to_string(R.census.back())},
                         {"seed", {b.seed.real(), b.seed.imag()}},
                         {"n_solutions", b.solutions.size()},
                         {"n_valid_points", n_valid},
                         {"n_overflow_points", n_over},
                         {"x_f_range", b.solutions.empty() ? json(nullptr)
                                                           : json({b.solutions.front().x_f, b.solutions.back().x_f})},
                         {"covers_grid", b.solutions.size() == grid.size()},
                         {"truncated_low", b.truncated_low},
                         {"truncated_high", b.truncated_high},
                         {"peak_log_amplitude", peak},
                         {"min_abs_im_x0", l.min_abs_im_x0},
                         {"mean_abs_im_x0", l.mean_abs_im_x0},
                         {"axis_crossings", crossings},
                         {"max_newton_iters", max_iters},
                         {"max_residual", max_res},
                         {"min_pole_distance", std::isfinite(min_pole) ? json(min_pole) : json(nullptr)},
                         {"focal_points", focal},
                         {"file", "psi_branch_" + std::to_string(b.id) + ".csv"}});
  }
  report["branches"] = inventory;
  report["census"] = {{"found", R.search.branches.size()},
                      {"contributing", R.contributing_count()},
                      {"real", n_real},
                      {"contribution_floor", cfg.reconstruction.contribution_floor},
                      {"log_amplitude_cap", cfg.reconstruction.log_amplitude_cap}};
  json scans = json::array();
  for (std::size_t s = 0; s < R.search.scans.size(); ++s) {
    const auto& sc = R.search.scans[s];
    json roots = json::array();
    for (const auto& r : sc.roots)
      roots.push_back({{"x0", {r.x0.real(), r.x0.imag()}},
                       {"log_amplitude", -r.S_f.imag() / cfg.constants.hbar},
                       {"residual", r.residual},
                       {"newton_iters", r.newton_iters}});
    json outcomes = json::object();
    for (const auto& [k, v] : sc.diagnostics.outcome_counts) outcomes[k] = v;
    scans.push_back({{"x_f", grid[bcfg.scan_indices.empty() ? grid.size() / 2 : bcfg.scan_indices[s]]},
                     {"roots", roots},
                     {"outcomes", outcomes}});
  }
  report["scans"] = scans;
  if (R.search.branches.empty()) R.warnings.push_back("no branches found");

  // Superpositions.
  const std::vector<complex>* ref = R.oracle ? &R.oracle->on_xf_grid : nullptr;
  auto region_of = [&](const std::string& name) -> const RegionSpec* {
    for (const auto& g : cfg.reconstruction.regions)
      if (g.name == name) return &g;
    return nullptr;
  };
  json pair_rankings = json::object();
  if (ref) {
    for (const auto& g : cfg.reconstruction.regions) {
      json arr = json::array();
      for (const auto& p : rank_pairs(contributing, *ref, g.lo, g.hi)) {
        json e{{"i", p.i}, {"j", p.j}};
        e.update(detail::metrics_json(p.metrics, cell));
        arr.push_back(e);
      }
      pair_rankings[g.name] = arr;
    }
  }
  report["pair_ranking"] = pair_rankings;

  for (const auto& spec : cfg.reconstruction.policies) {
    SumResult s;
    s.spec = spec;
    s.label = spec.label();
    try {
      SuperpositionPolicy pol;
      pol.cap = spec.cap;
      std::span<const BranchWavefunction> set = R.psi;
      if (spec.mode == "single") {
        pol = SuperpositionPolicy::single(spec.branches[0]);
      } else if (spec.mode == "pair") {
        pol = SuperpositionPolicy::pair(spec.branches[0], spec.branches[1]);
      } else if (spec.mode == "set") {
        pol.mode = SuperpositionPolicy::Mode::Explicit;
        pol.ids = spec.branches;
      } else if (spec.mode == "all") {
        pol = SuperpositionPolicy::all();
        set = contributing;
      } else if (spec.mode == "best_pair_per_point") {
        pol = SuperpositionPolicy::best_pair_per_point();
        set = contributing;
      } else if (spec.mode == "best_pair") {
        const auto* g = region_of(spec.region);
        const auto ranked = rank_pairs(contributing, *ref, g->lo, g->hi);
        if (ranked.empty()) throw Error(ErrorKind::EmptyRegion, "no branch pair is valid on region " + g->name);
        pol = SuperpositionPolicy::pair(ranked.front().i, ranked.front().j);
      } else if (spec.mode == "dominant") {
        double best = -1.0;
        int id = 0;
        for (const auto& w : contributing) {
          double p = 0.0;
          for (std::size_t k = 0; k < grid.size(); ++k) p += std::norm(w.psi[k]);
          if (p > best) {
            best = p;
            id = w.branch_id;
          }
        }
        if (id == 0) throw Error(ErrorKind::EmptyRegion, "no contributing branch");
        pol = SuperpositionPolicy::single(id);
      }
      pol.cap = spec.cap;
      if (pol.mode == SuperpositionPolicy::Mode::BestPairPerPoint && !ref)
        throw Error(ErrorKind::InvalidArgument, "best_pair_per_point needs the oracle");
      if (set.empty()) throw Error(ErrorKind::EmptyRegion, "no branches to superpose");
      s.sum = superpose(set, pol, ref ? std::span<const complex>(*ref) : std::span<const complex>{});
      if (pol.mode == SuperpositionPolicy::Mode::All)
        for (const auto& w : set) s.members.push_back(w.branch_id);
      else if (pol.mode != SuperpositionPolicy::Mode::BestPairPerPoint)
        s.members = pol.ids;
    } catch (const Error& e) {
      s.error = e.what();
      R.warnings.push_back("policy " + s.label + ": " + e.what());
    }
    R.sums.push_back(std::move(s));
  }

  // Comparisons.
  json comparisons = json::array();
  for (const auto& s : R.sums) {
    json entry{{"policy", s.label}, {"mode", s.spec.mode}, {"branches", s.members}};
    if (!s.error.empty()) {
      entry["error"] = s.error;
      comparisons.push_back(entry);
      continue;
    }
    entry["file"] = "psi_sum_" + s.label + ".csv";
    json regions = json::object();
    if (ref) {
      for (const auto& g : cfg.reconstruction.regions) {
        try {
          regions[g.name] = detail::metrics_json(compare(grid, s.sum->psi, *ref, g.lo, g.hi, s.sum->valid), cell);
        } catch (const Error& e) {
          regions[g.name] = {{"error", e.what()}};
        }
      }
    }
    entry["regions"] = regions;
    comparisons.push_back(entry);
  }
  report["comparisons"] = comparisons;

  // Nodal diagnostic.
  if (R.q_initial && R.q_final) {
    // Gaussian tails make |Q| grow without bound, so maxima are taken where
    // A is at least kBulkAmplitudeFraction of the wavefunction's peak.
    const double q0 = R.q_initial->max_abs_q(cfg.oracle.x_min, cfg.oracle.x_max,
                                             kBulkAmplitudeFraction * R.q_initial->max_amplitude());
    const double a_min = kBulkAmplitudeFraction * R.q_final->max_amplitude();
    json qr{{"bulk_amplitude_fraction", kBulkAmplitudeFraction},
            {"max_abs_q_initial", q0},
            {"q_initial_at_center", cfg.constants.hbar * cfg.constants.hbar * cfg.initial.alpha.real() / cfg.constants.mass},
            {"file", "qpotential.csv"}};
    json per = json::object();
    for (const auto& g : cfg.reconstruction.regions) {
      const double q = R.q_final->max_abs_q(g.lo, g.hi, a_min);
      per[g.name] = {{"max_abs_q", q}, {"ratio_to_initial", q0 > 0.0 ? q / q0 : 0.0}};
    }
    qr["regions"] = per;
    report["quantum_potential"] = qr;
  }

  // Transmission.
  if (cfg.transmission.enabled && R.oracle) {
    const auto& fin = R.oracle->final_state;
    json tr;
    double x_split = 0.0;
    if (cfg.transmission.x_split) {
      x_split = *cfg.transmission.x_split;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < fin.size(); ++j) {
        const double x = fin.x(j);
        if (x < cfg.transmission.window_lo || x > cfg.transmission.window_hi) continue;
        if (std::abs(fin.values[j]) < best) {
          best = std::abs(fin.values[j]);
          x_split = x;
        }
      }
    }
    tr["x_split"] = x_split;
    std::optional<double> p_ref;
    try {
      p_ref = transmission_probability(fin, x_split, cfg.transmission.split_tol);
      tr["oracle_probability"] = *p_ref;
    } catch (const Error& e) {
      tr["oracle_error"] = e.what();
      R.warnings.push_back(std::string("transmission: ") + e.what());
    }
    json per = json::array();
    for (const auto& s : R.sums) {
      if (!s.sum) continue;
      const double p = detail::trapezoid_probability(grid, s.sum->psi, s.sum->valid, x_split);
      json e{{"policy", s.label}, {"probability", p}};
      if (p_ref && *p_ref > 0.0) e["relative_error"] = std::abs(p - *p_ref) / *p_ref;
      per.push_back(e);
    }
    tr["bomca"] = per;
    report["transmission"] = tr;
  }

  json trajectory_stats;
  {
    int max_iters = 0;
    double max_res = 0.0;
    std::size_t n = 0;
    for (const auto& b : R.search.branches)
      for (const auto& s : b.solutions) {
        max_iters = std::max(max_iters, s.newton_iters);
        max_res = std::max(max_res, s.residual);
        ++n;
      }
    trajectory_stats = {{"stored_roots", n}, {"max_newton_iters", max_iters}, {"max_residual", max_res}};
  }
  report["diagnostics"] = trajectory_stats;
  report["warnings"] = R.warnings;
  report["config"] = config_to_json(cfg);
  R.report = std::move(report);
  R.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return R;
}

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw Error(ErrorKind::Config, "cannot write " + path.string());
    out_ << header << '\n';
  }

  template <class... Ts>
  void row(const Ts&... cols) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cols), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt17(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ofstream out_;
};

}  // namespace detail

/// Writes the grid wavefunction as x, Re psi, Im psi.
inline void write_grid_csv(const GridWavefunction& g, const std::filesystem::path& path) {
  detail::CsvFile f(path, "x,re_psi,im_psi");
  for (std::size_t j = 0; j < g.size(); ++j) f.row(g.x(j), g.values[j].real(), g.values[j].imag());
}

/// Writes every data file plus report.json into `dir`. Timing goes to
/// timing.json so that the rest stays byte-identical between runs.
inline void write_outputs(const ExperimentResult& R, const std::filesystem::path& dir) {
  using detail::CsvFile;
  std::filesystem::create_directories(dir);
  const auto& grid = R.xf_grid;
  {
    CsvFile f(dir / "branches.csv", "branch_id,x_f,re_x0,im_x0,re_S,im_S,residual,re_M,im_M,newton_iters,focal");
    for (const auto& b : R.search.branches)
      for (const auto& s : b.solutions)
        f.row(b.id, s.x_f, s.x0.real(), s.x0.imag(), s.S_f.real(), s.S_f.imag(), s.residual, s.M_f.real(),
              s.M_f.imag(), s.newton_iters, s.focal ? 1 : 0);
  }
  for (const auto& w : R.psi) {
    CsvFile f(dir / ("psi_branch_" + std::to_string(w.branch_id) + ".csv"), "x_f,re_psi,im_psi,abs_psi,status");
    for (std::size_t k = 0; k < grid.size(); ++k)
      f.row(grid[k], w.psi[k].real(), w.psi[k].imag(), std::abs(w.psi[k]), to_string(w.status[k]));
  }
  for (const auto& s : R.sums) {
    if (!s.sum) continue;
    const bool per_point = !s.sum->chosen.empty();
    CsvFile f(dir / ("psi_sum_" + s.label + ".csv"),
              per_point ? "x_f,re_psi,im_psi,abs_psi,valid,pair_i,pair_j" : "x_f,re_psi,im_psi,abs_psi,valid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const complex z = s.sum->psi[k];
      if (per_point)
        f.row(grid[k], z.real(), z.imag(), std::abs(z), static_cast<int>(s.sum->valid[k]), s.sum->chosen[k].first,
              s.sum->chosen[k].second);
      else
        f.row(grid[k], z.real(), z.imag(), std::abs(z), static_cast<int>(s.sum->valid[k]));
    }
  }
  if (R.oracle) {
    CsvFile f(dir / "psi_exact.csv", "x_f,re_psi,im_psi,abs_psi");
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const complex z = R.oracle->on_xf_grid[k];
      f.row(grid[k], z.real(), z.imag(), std::abs(z));
    }
    write_grid_csv(R.oracle->final_state, dir / "oracle_grid.csv");
  }
  if (R.q_final && R.q_initial) {
    CsvFile f(dir / "qpotential.csv", "x,amplitude,q,flagged,q_initial");
    const auto& q = *R.q_final;
    for (std::size_t j = 0; j < q.Q.size(); ++j)
      f.row(q.x(j), q.A[j], q.Q[j], q.flagged[j] ? 1 : 0, R.q_initial->Q[j]);
  }
  {
    std::ofstream out(dir / "report.json");
    out << R.report.dump(2) << '\n';
  }
  {
    json t{{"branch_search_seconds", R.search_seconds},
           {"oracle_seconds", R.oracle ? R.oracle->seconds : 0.0},
           {"total_seconds", R.total_seconds}};
    std::ofstream out(dir / "timing.json");
    out << t.dump(2) << '\n';
  }
}

}  // namespace bomca
