// analysis.hpp: metrics comparing a kinetic steady state with analytic approximations.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "boson_kinetics/lattice.hpp"

namespace boson_kinetics {

struct KlResult {
  double value = 0.0;
  std::vector<std::size_t> excluded_modes;  // n_ref > 0 but n_approx <= 0
  bool reliable() const noexcept { return excluded_modes.empty(); }
};

// Relative entropy sum_k p_k ln(p_k / q_k) of the normalized densities p = n_ref / N_ref,
// q = n_approx / N_approx (natural log). Modes with n_ref = 0 contribute nothing. Throws
// DomainError when no approximant value is positive.
KlResult kl_divergence(std::span<const double> n_ref, std::span<const double> n_approx);

struct KlRatio {
  double kl_pert = 0.0;
  double kl_be = 0.0;
  double R = 0.0;  // +inf when kl_pert == 0
  bool infinite = false;
  bool reliable = true;
};

KlRatio kl_ratio(std::span<const double> n_ref, std::span<const double> n_pert, std::span<const double> n_be);

// n(lowest mode) - n(highest mode); modes are ordered by ascending energy.
double ground_vs_top(std::span<const double> n);

struct TemperatureFit {
  double beta = 0.0;
  double mu = 0.0;  // NaN when beta == 0
  double max_residual = 0.0;
};

// Least-squares line through y_k = ln(1 + 1/n_k) versus omega_k: slope beta,
// intercept -beta mu. Throws DomainError on non-positive occupations.
TemperatureFit fit_inverse_temperature(std::span<const double> n, const ModeSpectrum& spectrum);

struct ComparisonReport {
  double kl_vs_perturbative = 0.0;
  double kl_vs_be = 0.0;
  double ratio_R = 0.0;
  double delta_n = 0.0;
  double fitted_beta = 0.0;
  double fitted_mu = 0.0;
  std::vector<std::size_t> excluded_modes;
};

}  // namespace boson_kinetics
