// perturbation.hpp: Bose-Einstein baseline and its perturbative deformation.
//
// The deformed distribution is
//
//   n(w) = n_BE(w) * { 1 - e^{beta0 (w - mu)} n_BE(w) [ A(w) - C ] },
//   A(w) = beta0^2 / (36 Delta) * (3 + beta0 Delta) * (w^2 + 18 J^2) * w,
//
// with mu fixed by sum_k n_BE = N and the single constant C fixed by sum_k n = N.
// The factor e^{beta0 (w - mu)} n_BE equals n_BE + 1, which is what the code evaluates.

#pragma once

#include <cstddef>
#include <vector>

#include "boson_kinetics/lattice.hpp"
#include "boson_kinetics/reservoir.hpp"

namespace boson_kinetics {

double bose_einstein(double omega, double beta0, double mu);

// Unique mu with sum_k n_BE(omega_k) = N, by bisection. Throws DomainError at beta0 = 0.
double solve_chemical_potential(const ModeSpectrum& spectrum, double N, double beta0);

// The deformation polynomial A(w) above.
double deformation_polynomial(double omega, double J, const ReservoirParams& reservoir);

struct PerturbativeSolution {
  double beta0 = 0.0;
  double mu = 0.0;
  double C = 0.0;          // constant multiplying the bracket directly
  double c_minus_form = 0.0;  // C = e^{-beta0 mu} c_minus_form
  double c_plus_form = 0.0;   // C = e^{+beta0 mu} c_plus_form
  std::vector<double> n_be;
  std::vector<double> n;
  bool includes_second_order = true;
  bool infinite_temperature = false;  // beta0 = 0 branch: n = N / L
  bool outside_perturbative_regime = false;  // some n_k < 0
};

// Throws DomainError when Delta = 0 (beta0 = 0).
PerturbativeSolution deformed_distribution(const ModeSpectrum& spectrum, double N,
                                           const ReservoirParams& reservoir);

// Like deformed_distribution, but returns the uniform N / L distribution (flagged) at
// Delta = 0 instead of throwing.
PerturbativeSolution deformed_or_uniform(const ModeSpectrum& spectrum, double N,
                                         const ReservoirParams& reservoir);

// beta(w) = beta0 [1 + beta0 / (36 Delta) (3 + beta0 Delta)(w^2 + 18 J^2)].
double energy_dependent_beta(double omega, double J, const ReservoirParams& reservoir);

struct OdeResiduals {
  double zeroth = 0.0;  // n0' + beta0 n0 (n0 + 1)
  double first = 0.0;   // n1' + beta0 n1 (n0 + 1), n1 = 0
  double second = 0.0;  // n2' + beta0 n2 (2 n0 + 1) + beta0^2 (3 + beta0 Delta)(6J^2 + w^2) / (12 Delta) n0 (n0 + 1)
};

// Max-norm residuals of the order-by-order ODEs on a dense grid of `points` energies
// over (-band_fraction * 2J, band_fraction * 2J), each relative to the largest term in
// its equation. Derivatives by Richardson-refined central differences, h = 1e-5 J.
OdeResiduals residual_supplemental_odes(const PerturbativeSolution& solution, double J,
                                        const ReservoirParams& reservoir, double band_fraction = 0.95,
                                        std::size_t points = 401);

// Max over the modes of the continuum steady-state condition evaluated for a
// distribution given on the mode grid (interpolated linearly in k between modes).
// Throws InvalidParameter for L < 3, where a band continuum makes no sense.
double continuum_steady_residual(const std::vector<double>& n, const ModeSpectrum& spectrum,
                                 const ReservoirParams& reservoir);

}  // namespace boson_kinetics
