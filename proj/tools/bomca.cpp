// bomca: run BOMCA experiments from a JSON config.
//
//   bomca run <config>              full pipeline, writes data files and report.json
//   bomca oracle <config>           reference propagation only
//   bomca scan <config> --xf <x>    one seed scan, prints the root clusters
//   bomca validate <config>         config check only
//
// Exit codes: 0 success (possibly with warnings), 1 invalid config, 2 pipeline failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "bomca/config.hpp"
#include "bomca/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPipeline = 2;

struct Common {
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_out) {
  cmd->add_option("config", c.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  if (with_out) cmd->add_option("--out", c.out, "output directory (overrides output.directory)");
  cmd->add_option("--threads", c.threads, "worker threads (default: hardware concurrency)");
  cmd->add_flag("--verbose,-v", c.verbose, "progress messages on stderr");
}

bomca::RunOptions run_options(const Common& c) {
  bomca::RunOptions o;
  o.threads = c.threads > 0 ? c.threads : bomca::default_thread_count();
  if (c.verbose) o.log = [](const std::string& s) { std::cerr << "[bomca] " << s << '\n'; };
  return o;
}

int cmd_validate(const Common& c) {
  const auto cfg = bomca::load_config(c.config);
  std::cout << "ok: " << cfg.name << " (N=" << cfg.truncation << ", potential=" << cfg.potential.kind()
            << ", t_final=" << cfg.t_final << ")\n";
  return kExitOk;
}

int cmd_oracle(const Common& c) {
  const auto cfg = bomca::load_config(c.config);
  if (cfg.oracle.method == bomca::OracleSettings::Method::None) {
    std::cerr << "error: oracle.method: config has no oracle\n";
    return kExitConfig;
  }
  const auto grid = cfg.xf_grid.points();
  const auto o = bomca::run_oracle(cfg, grid);
  const std::filesystem::path dir = c.out.empty() ? cfg.output_dir : c.out;
  std::filesystem::create_directories(dir);
  bomca::write_grid_csv(o.final_state, dir / "oracle_grid.csv");
  {
    bomca::detail::CsvFile f(dir / "psi_exact.csv", "x_f,re_psi,im_psi,abs_psi");
    for (std::size_t k = 0; k < grid.size(); ++k)
      f.row(grid[k], o.on_xf_grid[k].real(), o.on_xf_grid[k].imag(), std::abs(o.on_xf_grid[k]));
  }
  std::printf("method %s  norm drift %.3e  edge |psi| %.3e  (%.1f s)\n", o.method.c_str(), o.norm_drift,
              o.final_state.edge_amplitude(), o.seconds);
  std::printf("wrote %s\n", dir.string().c_str());
  return kExitOk;
}

int cmd_scan(const Common& c, double x_f) {
  const auto cfg = bomca::load_config(c.config);
  const auto model = bomca::make_model(cfg);
  const auto opts = run_options(c);
  const auto scan = bomca::seed_scan(model, cfg.search.region, x_f, cfg.search.newton, cfg.search.dedup_tol,
                                     opts.threads);
  std::size_t shown = 0, hidden = 0;
  for (const auto& r : scan.roots) {
    const double la = -r.S_f.imag() / cfg.constants.hbar;
    const auto census = bomca::classify_contribution(la, cfg);
    if (census == bomca::Census::Negligible) {
      ++hidden;
      if (!c.verbose) continue;
    } else {
      ++shown;
    }
    std::printf("root  x0 = %+.10f %+.10fi   ln|psi| = %+.4f   residual %.1e   iters %d   %s\n", r.x0.real(),
                r.x0.imag(), la, r.residual, r.newton_iters, std::string(bomca::to_string(census)).c_str());
  }
  std::printf("%zu roots at x_f = %g", shown, x_f);
  if (hidden > 0) std::printf(" (%zu more below the contribution floor)", hidden);
  std::printf("\n");
  if (c.verbose)
    for (const auto& [k, v] : scan.diagnostics.outcome_counts) std::fprintf(stderr, "  %-20s %d\n", k.c_str(), v);
  return kExitOk;
}

int cmd_run(const Common& c) {
  const auto cfg = bomca::load_config(c.config);
  const auto R = bomca::run_experiment(cfg, run_options(c));
  const std::filesystem::path dir = c.out.empty() ? cfg.output_dir : c.out;
  bomca::write_outputs(R, dir);
  std::printf("%zu branches (%zu contributing)\n", R.search.branches.size(), R.contributing_count());
  for (std::size_t i = 0; i < R.search.branches.size(); ++i) {
    const auto& b = R.search.branches[i];
    std::printf("  branch %d  %-9s %-12s  points %zu/%zu\n", b.id, std::string(to_string(R.labels[i].kind)).c_str(),
                std::string(to_string(R.census[i])).c_str(), b.solutions.size(), R.xf_grid.size());
  }
  for (const auto& w : R.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("wrote %s (%.1f s)\n", dir.string().c_str(), R.total_seconds);
  if (R.search.branches.empty() && !R.oracle) return kExitPipeline;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BOMCA complex-trajectory engine"};
  app.require_subcommand(1);
  Common common;
  double x_f = 0.0;
  auto* run = app.add_subcommand("run", "full pipeline");
  add_common(run, common, true);
  auto* oracle = app.add_subcommand("oracle", "reference propagation only");
  add_common(oracle, common, true);
  auto* scan = app.add_subcommand("scan", "seed scan at one final position");
  add_common(scan, common, false);
  scan->add_option("--xf", x_f, "target final position")->required();
  auto* validate = app.add_subcommand("validate", "check a config");
  add_common(validate, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(common);
    if (*oracle) return cmd_oracle(common);
    if (*scan) return cmd_scan(common, x_f);
    if (*validate) return cmd_validate(common);
  } catch (const bomca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == bomca::ErrorKind::Config ? kExitConfig : kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
  return kExitPipeline;
}
