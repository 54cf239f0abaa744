#pragma once

#include <json.hpp>
#include <string>

#include "heatlab/config.hpp"
#include "heatlab/criteria.hpp"

namespace heatlab {

// A parsed scenario with its built objects; hypothesis validation for the
// tagged theorem has already run (ParameterError otherwise).
struct BuiltScenario {
  Scenario cfg;
  ModelManifold manifold;
  RadialDriftField drift;
  std::vector<Barrier> barriers;
  int normalized_idx = -1;  // first barrier carrying a mass normalization
  int gaussian_idx = -1;    // gaussian supersolution, if any
  std::optional<Envelope> envelope;
  RadialFn u0;              // empty when no initial_datum block
};

BuiltScenario build_scenario(const Scenario& sc);

struct Report {
  nlohmann::json body;
  std::string path;  // report.json location
};

// Full scenario run: barriers + certificates, mass test, simulation, CSV and
// SVG artifacts, JSON report. Artifacts land in out_dir/<scenario name>/.
Report run_scenario_file(const std::string& config_path,
                         const std::string& out_dir);
Report run_scenario_json(const nlohmann::json& cfg,
                         const std::string& out_dir);

// Threshold test only; returns the verdict JSON.
nlohmann::json threshold_report_file(const std::string& config_path);
nlohmann::json threshold_report_json(const nlohmann::json& cfg);

// Builds the scenario barriers and writes certificates.json; returns its path.
std::string barrier_check_file(const std::string& config_path,
                               const std::string& out_dir);

// Parameter sweep over (p, amplitude); returns the phase CSV path. Cells run
// concurrently up to the worker budget (HEATLAB_WORKERS, default from the
// hardware, clamped to [1, 8]); per-cell numeric failures become
// inconclusive cells.
std::string sweep_file(const std::string& config_path,
                       const std::string& out_dir);

nlohmann::json certificate_to_json(const Barrier& b);

}  // namespace heatlab
