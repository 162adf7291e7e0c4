// reservoir.hpp: the driven lossy cavity acting as an engineered bath.
//
// All energies are in units of the hopping J. The bath enters the kinetics only
// through its Lorentzian noise spectrum
//
//     S(w) = |a0|^2 kappa / ((w + Delta)^2 + (kappa/2)^2),
//
// with |a0|^2 = Omega0^2 / (Delta^2 + (kappa/2)^2) the steady-state cavity occupation.

#pragma once

namespace boson_kinetics {

struct ReservoirParams {
  double chi = 1e-3;     // density-density coupling
  double Omega0 = 0.1;   // drive amplitude
  double Delta = -3.0;   // drive detuning, omega_d - omega_c
  double kappa = 1.0;    // cavity decay rate
};

// Throws InvalidParameter unless kappa > 0, Omega0 >= 0, chi >= 0 and all are finite.
void validate(const ReservoirParams& params);

double steady_amplitude_sq(const ReservoirParams& params);

double noise_spectrum(double omega, const ReservoirParams& params);

// beta0 = -4 Delta / (Delta^2 + (kappa/2)^2); positive for red detuning.
double base_inverse_temperature(const ReservoirParams& params);

// ln[S(w)/S(-w)] / w, continued to beta0 for |w| < 1e-8 J.
double effective_beta_exact(double omega, const ReservoirParams& params);

// Quadratic small-frequency truncation of the Stokes temperature. Throws DomainError at Delta = 0.
double effective_beta_expansion(double omega, const ReservoirParams& params);

// 3 + beta0 * Delta; vanishes on the line Delta = -sqrt(3) kappa / 2.
double curvature_factor(const ReservoirParams& params);

}  // namespace boson_kinetics
