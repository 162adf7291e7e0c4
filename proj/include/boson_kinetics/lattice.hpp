// lattice.hpp: single-particle modes of the 1D tight-binding array.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace boson_kinetics {

enum class Boundary { Open, Periodic };

struct LatticeParams {
  std::size_t L = 100;
  double J = 1.0;
  double omega0 = 0.0;
  Boundary boundary = Boundary::Open;
};

// Eigenmodes sorted by ascending energy (ties broken by ascending k).
// phi is row-major: phi[m * L + j] is the amplitude of mode m on site j (j = 0..L-1
// corresponds to sites 1..L).
struct ModeSpectrum {
  std::size_t L = 0;
  double J = 1.0;
  double omega0 = 0.0;
  Boundary boundary = Boundary::Open;
  std::vector<double> k;
  std::vector<double> omega;
  std::vector<std::complex<double>> phi;

  std::size_t size() const noexcept { return L; }
  const std::complex<double>& amplitude(std::size_t mode, std::size_t site) const {
    return phi[mode * L + site];
  }
};

enum class GammaMode { SiteResolved, Uniform };

ModeSpectrum build_modes(const LatticeParams& params);

// Continuum density of states of the band, D(w) = 1 / (2 pi J sqrt(1 - (w/2J)^2)).
// Throws DomainError for |omega| >= 2J.
double density_of_states(double omega, double J);

// Overlap factor gamma_{kk'} multiplying the golden-rule rate.
double overlap_factor(const ModeSpectrum& spectrum, std::size_t k, std::size_t kp,
                      GammaMode mode = GammaMode::SiteResolved);

// Full L x L overlap matrix, row-major.
std::vector<double> overlap_matrix(const ModeSpectrum& spectrum, GammaMode mode);

}  // namespace boson_kinetics
