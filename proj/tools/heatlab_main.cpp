#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "heatlab/runner.hpp"
#include "heatlab/verify.hpp"

using namespace heatlab;

// Exit codes: 0 success, 1 verification failures, 2 configuration or
// hypothesis errors, 3 numeric errors.
int main(int argc, char** argv) {
  CLI::App app{
      "heatlab: blow-up and global-existence experiments for reaction-"
      "diffusion flows with drift on radially symmetric manifolds"};
  app.require_subcommand(1);

  std::string config, out_dir = "out", suite;

  auto* sim = app.add_subcommand("simulate",
                                 "run a scenario config and emit CSV/SVG "
                                 "artifacts plus a JSON report");
  sim->add_option("config", config, "scenario JSON file")->required();
  sim->add_option("--out", out_dir, "artifact directory (default: out)");

  auto* thr = app.add_subcommand(
      "threshold", "weighted-mass threshold test; prints the verdict JSON");
  thr->add_option("config", config, "scenario JSON file")->required();

  auto* bar = app.add_subcommand(
      "barrier-check", "build the scenario barriers and write certificates");
  bar->add_option("config", config, "scenario JSON file")->required();
  bar->add_option("--out", out_dir, "artifact directory (default: out)");

  auto* swp = app.add_subcommand(
      "sweep", "run the (p, amplitude) sweep; emits phase CSV and SVG");
  swp->add_option("config", config, "scenario JSON file")->required();
  swp->add_option("--out", out_dir, "artifact directory (default: out)");

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite,
                  "geometry | barriers | criteria | solver | acceptance | all")
      ->required();
  ver->add_option("--out", out_dir, "scratch directory (default: out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      Report rep = run_scenario_file(config, out_dir);
      std::cout << rep.path << "\n";
    } else if (thr->parsed()) {
      std::cout << threshold_report_file(config).dump(2) << "\n";
    } else if (bar->parsed()) {
      std::cout << barrier_check_file(config, out_dir) << "\n";
    } else if (swp->parsed()) {
      std::cout << sweep_file(config, out_dir) << "\n";
    } else if (ver->parsed()) {
      const int failures = print_suite(suite, std::cout, out_dir);
      return failures == 0 ? 0 : 1;
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
