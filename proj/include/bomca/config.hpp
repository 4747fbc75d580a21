#pragma once

// Experiment configuration: one JSON file per experiment, loaded with
// field-path error messages and serializable back to the same structure.

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bomca/branch_finder.hpp"
#include "bomca/error.hpp"
#include "bomca/hierarchy.hpp"
#include "bomca/integrator.hpp"
#include "bomca/potentials.hpp"
#include "bomca/reconstruction.hpp"

namespace bomca {

using json = nlohmann::ordered_json;

struct GridSpec {
  double lo = -1.0;
  double hi = -0.05;
  int count = 200;

  std::vector<double> points() const {
    std::vector<double> x(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) x[k] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    return x;
  }

  bool operator==(const GridSpec&) const = default;
};

struct SearchSettings {
  SearchRegion region{-1.2, -0.2, -0.3, 0.3, 40, 40, 0.1};
  /// x_f values at which seed scans run; each snaps to the nearest grid point.
  std::vector<double> scan_at;
  double dedup_tol = 1e-5;
  double real_branch_tol = 1e-4;
  NewtonConfig newton;
  ContinuationConfig continuation;

  bool operator==(const SearchSettings&) const = default;
};

struct OracleSettings {
  enum class Method { SplitOperator, Analytic, None };
  Method method = Method::SplitOperator;
  double x_min = -4.0;
  double x_max = 4.0;
  int points = 4096;
  int steps = 32768;
  double edge_tol = 1e-10;

  bool operator==(const OracleSettings&) const = default;
};

/// A named x_f interval on which BOMCA is compared with the oracle.
struct RegionSpec {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const RegionSpec&) const = default;
};

/// Superposition requested in the config. Besides the reconstruction
/// policies there are two derived choices: "best_pair" (the pair ranked first
/// against the oracle on `region`) and "dominant" (the single branch with the
/// largest integrated |psi|^2 that is valid on the whole grid).
struct PolicySpec {
  std::string mode = "all";  ///< single | pair | set | all | best_pair | best_pair_per_point | dominant
  std::vector<int> branches;
  std::string region;  ///< best_pair only
  std::optional<double> cap;

  std::string label() const {
    std::string s = mode;
    for (int b : branches) s += "_" + std::to_string(b);
    if (!region.empty()) s += "_" + region;
    return s;
  }

  bool operator==(const PolicySpec&) const = default;
};

struct ReconstructionSettings {
  double log_amplitude_cap = kDefaultLogAmplitudeCap;
  bool include_focal = false;
  /// Branches whose peak |psi| stays below this fraction of the initial peak are "negligible".
  double contribution_floor = 1e-6;
  std::vector<PolicySpec> policies{PolicySpec{}};
  std::vector<RegionSpec> regions;

  bool operator==(const ReconstructionSettings&) const = default;
};

struct TransmissionSettings {
  bool enabled = false;
  /// Fixed split point; when absent the oracle |psi| minimum inside `window` is used.
  std::optional<double> x_split;
  double window_lo = -0.5;
  double window_hi = 0.5;
  double split_tol = 1e-8;

  bool operator==(const TransmissionSettings&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  PhysicalConstants constants;
  GaussianWavepacket initial;
  PotentialSpec potential;
  double pole_clearance = kDefaultPoleClearance;
  int truncation = 1;
  double t_final = 1.0;
  GridSpec xf_grid;
  SearchSettings search;
  IntegratorConfig integrator;
  OracleSettings oracle;
  ReconstructionSettings reconstruction;
  TransmissionSettings transmission;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

/// Walks one JSON object, remembering where it is and which keys were read.
class FieldReader {
 public:
  FieldReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Config, field + ": " + what);
  }

  std::string at(const std::string& key) const { return join_path(path_, key); }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(at(key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> fallback = {}) {
    if (!has(key)) {
      seen_.insert(key);
      if (fallback) return *fallback;
      fail(at(key), "missing required field");
    }
    const json& v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(at(key), "must be finite");
    return d;
  }

  long integer(const std::string& key, std::optional<long> fallback = {}) {
    if (!has(key)) {
      seen_.insert(key);
      if (fallback) return *fallback;
      fail(at(key), "missing required field");
    }
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = {}) {
    if (!has(key)) {
      seen_.insert(key);
      if (fallback) return *fallback;
      fail(at(key), "missing required field");
    }
    const json& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::size_t> exact_size = {}) {
    const json& v = raw(key);
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    if (exact_size && v.size() != *exact_size) fail(at(key), "expected " + std::to_string(*exact_size) + " entries");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return {};
    const json& v = j_.at(key);
    if (!v.is_array()) fail(at(key), "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) fail(at(key) + "[" + std::to_string(i) + "]", "expected an integer");
      out.push_back(v[i].get<int>());
    }
    return out;
  }

  std::optional<FieldReader> child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return FieldReader(j_.at(key), at(key));
  }

  /// Every key present in the object must have been consumed.
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(at(k), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) FieldReader::fail(field, what);
}

inline std::string method_name(OracleSettings::Method m) {
  switch (m) {
    case OracleSettings::Method::SplitOperator: return "split_operator";
    case OracleSettings::Method::Analytic: return "analytic";
    case OracleSettings::Method::None: return "none";
  }
  return "none";
}

}  // namespace detail

/// Checks every cross-field precondition; throws Error(Config) naming the field.
inline void validate(const ExperimentConfig& c) {
  using detail::require;
  require(c.constants.mass > 0.0, "constants.mass", "must be > 0");
  require(c.constants.hbar > 0.0, "constants.hbar", "must be > 0");
  require(c.initial.alpha.real() > 0.0, "initial_state.alpha", "real part must be > 0");
  require(c.pole_clearance > 0.0, "potential.pole_clearance", "must be > 0");
  require(c.truncation >= 1, "truncation", "must be >= 1 (got " + std::to_string(c.truncation) + ")");
  require(c.truncation + 2 <= kMaxJetOrder, "truncation",
          "must be <= " + std::to_string(kMaxJetOrder - 2) + " (derivatives up to N+2 are needed)");
  require(c.t_final > 0.0, "t_final", "must be > 0");
  require(c.xf_grid.count >= 2, "xf_grid.count", "must be >= 2");
  require(c.xf_grid.lo < c.xf_grid.hi, "xf_grid", "need lo < hi");

  const auto& r = c.search.region;
  require(r.re_lo < r.re_hi, "search.region.re", "need lo < hi");
  require(r.im_lo < r.im_hi, "search.region.im", "need lo < hi");
  require(r.n_re >= 2 && r.n_im >= 2, "search.region.seeds", "need at least 2 x 2 seeds");
  require(r.margin >= 0.0, "search.region.margin", "must be >= 0");
  for (std::size_t i = 0; i < c.search.scan_at.size(); ++i) {
    const double x = c.search.scan_at[i];
    require(x >= c.xf_grid.lo && x <= c.xf_grid.hi, "search.scan_at[" + std::to_string(i) + "]", "outside xf_grid");
  }
  require(c.search.dedup_tol > 0.0, "search.dedup_tol", "must be > 0");
  require(c.search.real_branch_tol > 0.0, "search.real_branch_tol", "must be > 0");
  require(c.search.newton.newton_tol > 0.0, "search.newton.tol", "must be > 0");
  require(c.search.newton.max_iters >= 1, "search.newton.max_iters", "must be >= 1");
  require(c.search.newton.max_step > 0.0, "search.newton.max_step", "must be > 0");
  require(c.search.newton.max_backtracks >= 0, "search.newton.max_backtracks", "must be >= 0");
  require(c.search.newton.focal_tol >= 0.0, "search.newton.focal_tol", "must be >= 0");
  require(c.search.continuation.jump_tol > 0.0, "search.continuation.jump_tol", "must be > 0");
  require(c.search.continuation.max_substep_depth >= 0, "search.continuation.max_substep_depth", "must be >= 0");

  const auto& ig = c.integrator;
  require(ig.rel_tol > 0.0, "integrator.rel_tol", "must be > 0");
  require(ig.abs_tol > 0.0, "integrator.abs_tol", "must be > 0");
  require(ig.h_min > 0.0, "integrator.h_min", "must be > 0");
  require(ig.h_init >= ig.h_min, "integrator.h_init", "must be >= h_min");
  require(ig.h_max <= 0.0 || ig.h_max >= ig.h_init, "integrator.h_max", "must be >= h_init (or 0 for automatic)");
  require(ig.max_steps > 0, "integrator.max_steps", "must be > 0");

  const auto& o = c.oracle;
  if (o.method == OracleSettings::Method::Analytic)
    require(c.potential.kind() != "eckart", "oracle.method", "analytic oracle needs a free or harmonic potential");
  if (o.method != OracleSettings::Method::None) {
    require(o.x_min < o.x_max, "oracle", "need x_min < x_max");
    require(o.points >= 16 && (o.points & (o.points - 1)) == 0, "oracle.points", "must be a power of two >= 16");
    require(o.steps >= 1, "oracle.steps", "must be >= 1");
    require(o.edge_tol > 0.0, "oracle.edge_tol", "must be > 0");
    require(o.x_min <= c.xf_grid.lo && o.x_max >= c.xf_grid.hi, "oracle", "grid must contain xf_grid");
  }

  const auto& rc = c.reconstruction;
  require(rc.log_amplitude_cap > 0.0, "reconstruction.log_amplitude_cap", "must be > 0");
  require(rc.contribution_floor >= 0.0, "reconstruction.contribution_floor", "must be >= 0");
  std::set<std::string> names;
  for (std::size_t i = 0; i < rc.regions.size(); ++i) {
    const auto& g = rc.regions[i];
    const std::string f = "reconstruction.regions[" + std::to_string(i) + "]";
    require(!g.name.empty(), f + ".name", "must not be empty");
    require(names.insert(g.name).second, f + ".name", "duplicate region name '" + g.name + "'");
    require(g.lo < g.hi, f, "need lo < hi");
  }
  for (std::size_t i = 0; i < rc.policies.size(); ++i) {
    const auto& p = rc.policies[i];
    const std::string f = "reconstruction.policies[" + std::to_string(i) + "]";
    static const std::set<std::string> modes{"single", "pair", "set", "all", "best_pair", "best_pair_per_point",
                                             "dominant"};
    require(modes.count(p.mode) == 1, f + ".mode", "unknown mode '" + p.mode + "'");
    if (p.mode == "single") require(p.branches.size() == 1, f + ".branches", "single needs one branch id");
    if (p.mode == "pair")
      require(p.branches.size() == 2 && p.branches[0] != p.branches[1], f + ".branches", "pair needs two distinct ids");
    if (p.mode == "set") require(!p.branches.empty(), f + ".branches", "set needs at least one id");
    for (int b : p.branches) require(b >= 1, f + ".branches", "branch ids start at 1");
    if (p.mode == "best_pair") require(names.count(p.region) == 1, f + ".region", "must name a comparison region");
    if (p.mode == "best_pair" || p.mode == "best_pair_per_point")
      require(o.method != OracleSettings::Method::None, f + ".mode", "needs an oracle");
    if (p.cap) require(*p.cap > 0.0, f + ".cap", "must be > 0");
  }
  if (c.transmission.enabled) {
    require(o.method != OracleSettings::Method::None, "transmission.enabled", "needs an oracle");
    require(c.transmission.window_lo < c.transmission.window_hi, "transmission.split_window", "need lo < hi");
    require(c.transmission.split_tol > 0.0, "transmission.split_tol", "must be > 0");
  }
  require(!c.output_dir.empty(), "output.directory", "must not be empty");
}

inline ExperimentConfig config_from_json(const json& root) {
  using detail::FieldReader;
  ExperimentConfig c;
  FieldReader top(root, "");
  c.name = top.string("name", c.name);

  if (auto r = top.child("constants")) {
    c.constants.mass = r->number("mass", c.constants.mass);
    c.constants.hbar = r->number("hbar", c.constants.hbar);
    r->finish();
  }
  {
    auto r = top.child("initial_state");
    if (!r) FieldReader::fail("initial_state", "missing required section");
    if (r->has("alpha") && r->raw("alpha").is_array()) {
      const auto a = r->numbers("alpha", 2);
      c.initial.alpha = {a[0], a[1]};
    } else {
      c.initial.alpha = r->number("alpha");
    }
    c.initial.x_c = r->number("x_c");
    c.initial.p_c = r->number("p_c");
    r->finish();
  }
  {
    auto r = top.child("potential");
    if (!r) FieldReader::fail("potential", "missing required section");
    const std::string kind = r->string("kind");
    try {
      if (kind == "free") {
        c.potential = FreePotential{};
      } else if (kind == "harmonic") {
        c.potential = HarmonicPotential{r->number("k")};
      } else if (kind == "eckart") {
        c.potential = EckartPotential{r->number("D"), r->number("beta")};
      } else {
        FieldReader::fail("potential.kind", "unknown potential '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config) throw;
      FieldReader::fail("potential", e.what());
    }
    c.pole_clearance = r->number("pole_clearance", c.pole_clearance);
    r->finish();
  }
  c.truncation = static_cast<int>(top.integer("truncation"));
  c.t_final = top.number("t_final");
  if (auto r = top.child("xf_grid")) {
    c.xf_grid.lo = r->number("lo");
    c.xf_grid.hi = r->number("hi");
    c.xf_grid.count = static_cast<int>(r->integer("count", c.xf_grid.count));
    r->finish();
  }
  if (auto r = top.child("search")) {
    auto& s = c.search;
    if (auto g = r->child("region")) {
      const auto re = g->numbers("re", 2), im = g->numbers("im", 2);
      s.region.re_lo = re[0];
      s.region.re_hi = re[1];
      s.region.im_lo = im[0];
      s.region.im_hi = im[1];
      const auto seeds = g->integers("seeds");
      if (!seeds.empty()) {
        if (seeds.size() != 2) FieldReader::fail("search.region.seeds", "expected [n_re, n_im]");
        s.region.n_re = seeds[0];
        s.region.n_im = seeds[1];
      }
      s.region.margin = g->number("margin", s.region.margin);
      g->finish();
    }
    if (r->has("scan_at")) s.scan_at = r->numbers("scan_at");
    else r->child("scan_at");
    s.dedup_tol = r->number("dedup_tol", s.dedup_tol);
    s.real_branch_tol = r->number("real_branch_tol", s.real_branch_tol);
    if (auto n = r->child("newton")) {
      s.newton.newton_tol = n->number("tol", s.newton.newton_tol);
      s.newton.max_iters = static_cast<int>(n->integer("max_iters", s.newton.max_iters));
      s.newton.focal_tol = n->number("focal_tol", s.newton.focal_tol);
      s.newton.max_step = n->number("max_step", s.newton.max_step);
      s.newton.max_backtracks = static_cast<int>(n->integer("max_backtracks", s.newton.max_backtracks));
      n->finish();
    }
    if (auto n = r->child("continuation")) {
      s.continuation.jump_tol = n->number("jump_tol", s.continuation.jump_tol);
      s.continuation.max_substep_depth =
          static_cast<int>(n->integer("max_substep_depth", s.continuation.max_substep_depth));
      n->finish();
    }
    r->finish();
  }
  if (auto r = top.child("integrator")) {
    auto& ig = c.integrator;
    ig.rel_tol = r->number("rel_tol", ig.rel_tol);
    ig.abs_tol = r->number("abs_tol", ig.abs_tol);
    ig.h_init = r->number("h_init", ig.h_init);
    ig.h_min = r->number("h_min", ig.h_min);
    ig.h_max = r->number("h_max", ig.h_max);
    ig.max_steps = r->integer("max_steps", ig.max_steps);
    r->finish();
  }
  if (auto r = top.child("oracle")) {
    auto& o = c.oracle;
    const std::string m = r->string("method", "split_operator");
    if (m == "split_operator") o.method = OracleSettings::Method::SplitOperator;
    else if (m == "analytic") o.method = OracleSettings::Method::Analytic;
    else if (m == "none") o.method = OracleSettings::Method::None;
    else FieldReader::fail("oracle.method", "unknown method '" + m + "'");
    o.x_min = r->number("x_min", o.x_min);
    o.x_max = r->number("x_max", o.x_max);
    o.points = static_cast<int>(r->integer("points", o.points));
    o.steps = static_cast<int>(r->integer("steps", o.steps));
    o.edge_tol = r->number("edge_tol", o.edge_tol);
    r->finish();
  }
  if (auto r = top.child("reconstruction")) {
    auto& rc = c.reconstruction;
    rc.log_amplitude_cap = r->number("log_amplitude_cap", rc.log_amplitude_cap);
    rc.include_focal = r->boolean("include_focal", rc.include_focal);
    rc.contribution_floor = r->number("contribution_floor", rc.contribution_floor);
    if (r->has("policies")) {
      const json& arr = r->raw("policies");
      if (!arr.is_array()) FieldReader::fail("reconstruction.policies", "expected an array");
      rc.policies.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        FieldReader p(arr[i], "reconstruction.policies[" + std::to_string(i) + "]");
        PolicySpec ps;
        ps.mode = p.string("mode");
        ps.branches = p.integers("branches");
        ps.region = p.string("region", "");
        if (p.has("cap")) ps.cap = p.number("cap");
        else p.child("cap");
        p.finish();
        rc.policies.push_back(std::move(ps));
      }
    } else {
      r->child("policies");
    }
    if (r->has("regions")) {
      const json& arr = r->raw("regions");
      if (!arr.is_array()) FieldReader::fail("reconstruction.regions", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        FieldReader g(arr[i], "reconstruction.regions[" + std::to_string(i) + "]");
        RegionSpec rs;
        rs.name = g.string("name");
        rs.lo = g.number("lo");
        rs.hi = g.number("hi");
        g.finish();
        rc.regions.push_back(std::move(rs));
      }
    } else {
      r->child("regions");
    }
    r->finish();
  }
  if (auto r = top.child("transmission")) {
    auto& t = c.transmission;
    t.enabled = r->boolean("enabled", t.enabled);
    if (r->has("x_split")) t.x_split = r->number("x_split");
    else r->child("x_split");
    if (r->has("split_window")) {
      const auto w = r->numbers("split_window", 2);
      t.window_lo = w[0];
      t.window_hi = w[1];
    } else {
      r->child("split_window");
    }
    t.split_tol = r->number("split_tol", t.split_tol);
    r->finish();
  }
  if (auto r = top.child("output")) {
    c.output_dir = r->string("directory", c.output_dir);
    r->finish();
  }
  top.finish();
  validate(c);
  return c;
}

inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["constants"] = {{"mass", c.constants.mass}, {"hbar", c.constants.hbar}};
  json init;
  if (c.initial.alpha.imag() == 0.0) init["alpha"] = c.initial.alpha.real();
  else init["alpha"] = {c.initial.alpha.real(), c.initial.alpha.imag()};
  init["x_c"] = c.initial.x_c;
  init["p_c"] = c.initial.p_c;
  j["initial_state"] = init;
  json pot;
  pot["kind"] = c.potential.kind();
  if (const auto* h = std::get_if<HarmonicPotential>(&c.potential.variant())) pot["k"] = h->k;
  if (const auto* e = std::get_if<EckartPotential>(&c.potential.variant())) {
    pot["D"] = e->D;
    pot["beta"] = e->beta;
  }
  pot["pole_clearance"] = c.pole_clearance;
  j["potential"] = pot;
  j["truncation"] = c.truncation;
  j["t_final"] = c.t_final;
  j["xf_grid"] = {{"lo", c.xf_grid.lo}, {"hi", c.xf_grid.hi}, {"count", c.xf_grid.count}};
  const auto& s = c.search;
  j["search"] = {
      {"region",
       {{"re", {s.region.re_lo, s.region.re_hi}},
        {"im", {s.region.im_lo, s.region.im_hi}},
        {"seeds", {s.region.n_re, s.region.n_im}},
        {"margin", s.region.margin}}},
      {"scan_at", s.scan_at},
      {"dedup_tol", s.dedup_tol},
      {"real_branch_tol", s.real_branch_tol},
      {"newton",
       {{"tol", s.newton.newton_tol},
        {"max_iters", s.newton.max_iters},
        {"focal_tol", s.newton.focal_tol},
        {"max_step", s.newton.max_step},
        {"max_backtracks", s.newton.max_backtracks}}},
      {"continuation",
       {{"jump_tol", s.continuation.jump_tol}, {"max_substep_depth", s.continuation.max_substep_depth}}}};
  const auto& ig = c.integrator;
  j["integrator"] = {{"rel_tol", ig.rel_tol}, {"abs_tol", ig.abs_tol},     {"h_init", ig.h_init},
                     {"h_min", ig.h_min},     {"h_max", ig.h_max},         {"max_steps", ig.max_steps}};
  const auto& o = c.oracle;
  j["oracle"] = {{"method", detail::method_name(o.method)},
                 {"x_min", o.x_min},
                 {"x_max", o.x_max},
                 {"points", o.points},
                 {"steps", o.steps},
                 {"edge_tol", o.edge_tol}};
  json pols = json::array();
  for (const auto& p : c.reconstruction.policies) {
    json q{{"mode", p.mode}};
    if (!p.branches.empty()) q["branches"] = p.branches;
    if (!p.region.empty()) q["region"] = p.region;
    if (p.cap) q["cap"] = *p.cap;
    pols.push_back(q);
  }
  json regs = json::array();
  for (const auto& r : c.reconstruction.regions) regs.push_back({{"name", r.name}, {"lo", r.lo}, {"hi", r.hi}});
  j["reconstruction"] = {{"log_amplitude_cap", c.reconstruction.log_amplitude_cap},
                         {"include_focal", c.reconstruction.include_focal},
                         {"contribution_floor", c.reconstruction.contribution_floor},
                         {"policies", pols},
                         {"regions", regs}};
  const auto& t = c.transmission;
  json tr{{"enabled", t.enabled}};
  if (t.x_split) tr["x_split"] = *t.x_split;
  tr["split_window"] = {t.window_lo, t.window_hi};
  tr["split_tol"] = t.split_tol;
  j["transmission"] = tr;
  j["output"] = {{"directory", c.output_dir}};
  return j;
}

inline ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("<file>: not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bomca
