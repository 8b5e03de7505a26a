// landau-sim: deterministic particle simulator for the homogeneous
// multispecies Landau equation.
//
//   landau-sim run <config> [--desk] [--threads K] [--out DIR]
//   landau-sim convergence <config> --n 20,30,40 [--desk] [--out DIR]
//   landau-sim check-config <config> [--desk]
//
// Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "landau/parallel.hpp"
#include "landau/scenario.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

landau::ScenarioConfig load(const std::string& path, bool desk) {
  auto cfg = landau::load_config(path);
  return desk ? landau::apply_desk(cfg) : cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving particle simulator for the multispecies Landau equation"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  bool desk = false;
  int threads = 0;
  std::vector<int> n_list;

  auto* run = app.add_subcommand("run", "Integrate a scenario and write diagnostics");
  run->add_option("config", config, "Scenario file (JSON)")->required();
  run->add_flag("--desk", desk, "Use the reduced-cost desk variant of the preset");
  run->add_option("--threads", threads, "Worker threads (overrides LANDAU_NUM_THREADS)");
  run->add_option("--out", out_dir, "Output directory (default: output.directory of the config)");

  auto* conv = app.add_subcommand("convergence", "Grid-refinement study against the BKW solution");
  conv->add_option("config", config, "Scenario file (JSON)")->required();
  conv->add_option("--n", n_list, "Grid sizes per axis")->required()->delimiter(',');
  conv->add_flag("--desk", desk, "Use the desk variant (dt, t_final) of the preset");
  conv->add_option("--threads", threads, "Worker threads (overrides LANDAU_NUM_THREADS)");
  conv->add_option("--out", out_dir, "Output directory (default: output.directory of the config)");

  auto* check = app.add_subcommand("check-config", "Validate a scenario and print derived quantities");
  check->add_option("config", config, "Scenario file (JSON)")->required();
  check->add_flag("--desk", desk, "Report the desk variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (threads > 0) landau::set_num_threads(threads);

  try {
    if (*check) {
      std::cout << landau::check_config_report(load(config, desk));
      return 0;
    }
    const auto cfg = load(config, desk);
    const std::string dir = out_dir.empty() ? cfg.output.directory : out_dir;
    if (*run) {
      const auto summary = landau::run(cfg, dir);
      std::printf("%d steps to t=%.6g in %.2fs; drift: mass %.3e momentum %.3e energy %.3e\n",
                  summary.steps, summary.final_time, summary.wall_seconds, summary.mass_drift,
                  summary.momentum_drift, summary.energy_drift);
      return 0;
    }
    const auto result = landau::convergence(cfg, n_list, dir);
    for (std::size_t i = 0; i < result.orders.size(); ++i)
      std::printf("species %zu fitted orders: L1 %.3f  L2 %.3f  Linf %.3f\n", i + 1,
                  result.orders[i][0], result.orders[i][1], result.orders[i][2]);
    return 0;
  } catch (const landau::ValidationError& e) {
    std::cerr << e.what();
    return kExitValidation;
  } catch (const landau::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const landau::BetaMismatch& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
