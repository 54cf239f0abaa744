#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "heatlab/drift.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/solver.hpp"

namespace heatlab {

// Scenario configuration, schema_version 1. Parsing is strict: unknown keys
// anywhere in the document are a schema error naming the key.

struct ManifoldConfig {
  std::string kind = "euclidean";
  int n = 3;
  double h = 0;
  double beta_bar = 0;
};

struct DriftConfig {
  std::string kind = "none";
  double value = 0;  // constant_radial
  double nu = 0;     // inverse_r
  std::vector<double> r, b;  // sampled
  DriftBounds bounds;        // overrides/additions to the natural bounds
};

struct DatumConfig {
  std::string kind = "gaussian";  // gaussian | constant_on_ball | barrier_multiple
  double amplitude = 1.0;
  double width = 1.0;
  double radius = 1.0;
  double factor = 1.0;
  std::string family;  // barrier_multiple target
};

struct BarrierConfig {
  std::string family;  // phi | eta | w | gaussian_super
  double lambda = 0;
  double div_bound = 0;
  double h2 = 0;
  double r0 = 1.0;
  double c1 = 1.0;
  double a = 0;
  bool has_a = false;
  double sigma = 0;
  double epsilon = 0;
  double t0 = 1.0;
  std::optional<double> p;  // gaussian_super override of the scenario p
};

struct SweepConfig {
  std::vector<double> p_values;
  std::vector<double> amplitudes;
};

struct Scenario {
  std::string name = "scenario";
  std::string theorem_tag = "freeform";
  ManifoldConfig manifold;
  DriftConfig drift;
  double p = 0;
  bool has_p = false;
  DatumConfig datum;
  bool has_datum = false;
  std::vector<BarrierConfig> barriers;
  std::optional<double> envelope_c_tilde;
  SolverConfig solver;
  bool solver_given = false;
  std::optional<SweepConfig> sweep;
  unsigned seed = 0;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

ModelManifold make_manifold(const ManifoldConfig& c);
RadialDriftField make_drift(const DriftConfig& c);

const std::vector<std::string>& known_theorem_tags();

}  // namespace heatlab
