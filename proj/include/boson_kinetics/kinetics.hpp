// kinetics.hpp: time evolution of the mode occupations under the golden-rule rates.
//
// Time is measured in tau = chi^2 t / J throughout.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/kernels.hpp"
#include "boson_kinetics/lattice.hpp"
#include "boson_kinetics/quadrature.hpp"
#include "boson_kinetics/reservoir.hpp"

namespace boson_kinetics {

struct Occupations {
  std::vector<double> n;
  double tau = 0.0;
  double N = 0.0;

  static Occupations uniform(std::size_t L, double N);
  // Builds from per-mode values; N is their sum. Throws InvalidParameter on negative
  // entries (below -1e-12) or non-finite values.
  static Occupations from(std::vector<double> n, double tau = 0.0);

  double total() const;
};

struct Trajectory {
  std::vector<Occupations> snapshots;
  bool converged = false;
  double final_residual = 0.0;
  double max_drift = 0.0;  // max |sum n - N| over all accepted steps
  bool positivity_violated = false;
  std::size_t steps = 0;
};

struct EvolveOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;  // per component, multiplied by N
  double min_step = 1e-14;
  double initial_step = 1e-3;
  KernelPolicy kernel = KernelPolicy::Reference;
};

// Integrates with an adaptive Dormand-Prince 5(4) pair and records a snapshot at every
// requested tau (sorted, within [0, tau_end]) from the dense output.
Trajectory evolve(const Occupations& n0, const RateContext& ctx, double tau_end,
                  std::span<const double> output_taus, const EvolveOptions& options = {});

struct SteadyStateOptions {
  EvolveOptions evolve;
  double residual_tol = 1e-10;
  double tau_max = 1e7;
  // Newton refinement of the time-marched state on the exact fixed-point equations
  // with the particle-number constraint. Only accepted when it lowers the residual.
  bool polish = true;
};

struct SteadyState {
  Occupations state;
  bool converged = false;
  double residual = 0.0;
  double march_residual = 0.0;  // residual when time marching stopped, before polishing
  double max_drift = 0.0;
  std::size_t steps = 0;
};

// max_k |dn_k/dtau| / N
double steady_residual(std::span<const double> n, const RateContext& ctx, double N);

// Throws ConvergenceError (with residual history) when tau_max is reached, and when the
// bath is uncoupled (chi = 0): there is no dynamics to relax.
SteadyState find_steady_state(const Occupations& n0, const RateContext& ctx,
                              const SteadyStateOptions& options = {});

// Early-time drift of a uniformly filled band at energy omega_k (per unit chi^2/J):
//   gamma n0 (n0 + 1) J * Integral dw D(w + omega_k) [S(w) - S(-w)]
// gamma defaults to 1/L. Multiply by L for the discrete-mode normalization.
double early_time_rate(double omega_k, double n0_uniform, const LatticeParams& lattice,
                       const ReservoirParams& reservoir, const GaussLegendre& rule,
                       std::optional<double> gamma = std::nullopt);

double early_time_rate(double omega_k, double n0_uniform, const LatticeParams& lattice,
                       const ReservoirParams& reservoir);

}  // namespace boson_kinetics
