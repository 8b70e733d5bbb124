#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "modica/config.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  double tol_scale = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("config", opts.config_path, "run configuration file")->required();
  cmd->add_option("--seed", opts.seed, "override the configured seed");
  cmd->add_option("--out", opts.out, "override the output directory");
  cmd->add_option("--tol-scale", opts.tol_scale, "scale the bound/lemma tolerances");
}

int execute(const CommonOpts& opts, const std::optional<std::vector<std::string>>& checks) {
  try {
    modica::RunConfig cfg = modica::parse_config(opts.config_path);
    modica::RunOverrides ov;
    ov.seed = opts.seed;
    ov.out_dir = opts.out;
    ov.tol_scale = opts.tol_scale;
    ov.checks = checks;
    return modica::run_config(cfg, ov);
  } catch (const modica::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MODICA_THREADS")) {
#ifdef _OPENMP
    int t = std::atoi(threads);
    if (t > 0) omp_set_num_threads(t);
#endif
  }

  CLI::App app{"gradient-bound laboratory for quasilinear elliptic operators"};
  app.require_subcommand(1);

  CommonOpts run_opts, ell_opts, solve_opts, verify_opts;
  std::vector<std::string> verify_checks;

  CLI::App* run = app.add_subcommand("run", "execute every check listed in the config");
  add_common(run, run_opts);

  CLI::App* ell = app.add_subcommand("check-ellipticity", "ellipticity certificate only");
  add_common(ell, ell_opts);

  CLI::App* solve = app.add_subcommand("solve", "solve only");
  add_common(solve, solve_opts);

  CLI::App* verify = app.add_subcommand("verify", "execute a named subset of checks");
  add_common(verify, verify_opts);
  verify->add_option("--checks", verify_checks, "comma list of checks")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return execute(run_opts, std::nullopt);
  if (ell->parsed()) return execute(ell_opts, std::vector<std::string>{"ellipticity"});
  if (solve->parsed()) return execute(solve_opts, std::vector<std::string>{"solve"});
  if (verify->parsed()) return execute(verify_opts, verify_checks);
  return 2;
}
