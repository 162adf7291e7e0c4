// runner.hpp: orchestration behind the command-line tool: single runs, snapshot runs,
// parameter sweeps, spectrum dumps and the verification suite, plus their file output.
//
// CSV files are RFC 4180 with '.' decimals and 17 significant digits:
//   steady_state.csv   mode_index,k,omega_over_J,n
//   perturbative.csv   mode_index,omega_over_J,n_be,n_deformed,beta_of_omega
//   snapshot_tau<t>.csv, snapshots.csv   tau,mode_index,omega_over_J,n
//   sweep.csv          delta_over_J,kappa_over_J[,other axes],<metrics>,error
//   spectrum.csv       omega_over_J,S,beta_eff_exact,beta_eff_expansion

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "boson_kinetics/analysis.hpp"
#include "boson_kinetics/config.hpp"
#include "boson_kinetics/kinetics.hpp"
#include "boson_kinetics/perturbation.hpp"

namespace boson_kinetics {

struct SingleRunResult {
  RunConfig config;
  ModeSpectrum spectrum;
  SteadyState steady;
  PerturbativeSolution perturbative;
  std::vector<double> beta_of_omega;  // empty when Delta = 0
  ComparisonReport report;
  bool kl_reliable = true;
  bool ratio_infinite = false;
  double N_drift = 0.0;  // sum n - N of the returned steady state
};

SingleRunResult compute_single(const RunConfig& config);

struct SweepRow {
  std::vector<double> axis_values;  // one entry per axis, in axis order
  RunConfig cell;
  std::vector<double> metrics;      // aligned with SweepSpec::metrics; NaN on failure
  std::string error;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // axis1 outer, axis2 inner
};

// Cells are independent; threads > 1 evaluates them concurrently with identical results.
SweepResult compute_sweep(const RunConfig& config, const SweepSpec& spec, int threads = 1);

Trajectory compute_snapshots(const RunConfig& config);

// Output writers; all throw IoError on failure.
void write_single(const SingleRunResult& result, const std::filesystem::path& dir);
void write_snapshots(const RunConfig& config, const ModeSpectrum& spectrum, const Trajectory& traj,
                     const std::filesystem::path& dir);
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);
void write_spectrum(const RunConfig& config, const std::filesystem::path& dir, std::size_t points = 801);

std::string steady_state_csv(const SingleRunResult& result);
std::string perturbative_csv(const SingleRunResult& result);
std::string report_json(const SingleRunResult& result);
std::string sweep_csv(const SweepResult& result);
std::string snapshot_file_name(double tau);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

// Residual and oracle checks runnable from the command line.
std::vector<VerifyCheck> run_verification(const RunConfig& config);

}  // namespace boson_kinetics
