// config.hpp: JSON run configuration and sweep specification.
//
// Schema (every field optional; defaults are the L = 100, N = 50 open chain with
// chi = J/1000, Omega0 = J/10, Delta = -3J, kappa = J):
//
// {
//   "lattice":   {"L": 100, "boundary": "open" | "periodic"},
//   "particles": {"N": 50},
//   "reservoir": {"chi_over_J": 0.001, "omega0_drive_over_J": 0.1,
//                 "delta_over_J": -3.0, "kappa_over_J": 1.0},
//   "gamma_mode": "site_resolved" | "uniform",
//   "evolution": {"tau_max": 1e7, "rel_tol": 1e-8, "abs_tol": 1e-12,
//                 "residual_tol": 1e-10, "snapshot_taus": [], "polish": true},
//   "outputs":   {"directory": "out", "write_report": true},
//   "threads": 1,
//   "sweep": {"axis1": {"name": "delta_over_J", "values": [...]},
//             "axis2": {"name": "kappa_over_J", "values": [...]},
//             "metrics": ["kl", "kl_be", "R", "delta_n", "fitted_beta"]}
// }
//
// abs_tol is relative to N. Unknown keys are rejected.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "boson_kinetics/kinetics.hpp"
#include "boson_kinetics/lattice.hpp"
#include "boson_kinetics/reservoir.hpp"

namespace boson_kinetics {

struct SweepAxis {
  std::string name;
  std::vector<double> values;
  bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  std::vector<std::string> metrics{"kl", "kl_be", "R", "delta_n", "fitted_beta"};
  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  std::size_t L = 100;
  Boundary boundary = Boundary::Open;
  double N = 50.0;
  double chi_over_J = 1e-3;
  double omega0_drive_over_J = 0.1;
  double delta_over_J = -3.0;
  double kappa_over_J = 1.0;
  GammaMode gamma_mode = GammaMode::SiteResolved;
  double tau_max = 1e7;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double residual_tol = 1e-10;
  bool polish = true;
  std::vector<double> snapshot_taus;
  std::string output_directory = "out";
  bool write_report = true;
  int threads = 1;
  std::optional<SweepSpec> sweep;

  bool operator==(const RunConfig&) const = default;

  LatticeParams lattice() const;
  ReservoirParams reservoir() const;
  SteadyStateOptions steady_options() const;
  EvolveOptions evolve_options() const;
};

// Names accepted as sweep axes.
const std::vector<std::string>& sweep_axis_names();
const std::vector<std::string>& sweep_metric_names();

// Sets a named scalar field (a sweep axis). "density" sets N = value * L.
void set_parameter(RunConfig& config, const std::string& name, double value);
double get_parameter(const RunConfig& config, const std::string& name);

// Throws ConfigError naming the offending path.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);

// Throws ConfigError with the violated constraint.
void validate(const RunConfig& config);

}  // namespace boson_kinetics
