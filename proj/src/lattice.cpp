#include "boson_kinetics/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "boson_kinetics/errors.hpp"

namespace boson_kinetics {

namespace {

void validate(const LatticeParams& params) {
  if (params.L == 0) throw InvalidParameter("lattice: L must be >= 1");
  if (!(params.J > 0.0) || !std::isfinite(params.J))
    throw InvalidParameter("lattice: J must be finite and > 0");
  if (!std::isfinite(params.omega0)) throw InvalidParameter("lattice: omega0 must be finite");
}

}  // namespace

ModeSpectrum build_modes(const LatticeParams& params) {
  validate(params);
  using std::numbers::pi;
  const std::size_t L = params.L;

  std::vector<double> k(L);
  if (params.boundary == Boundary::Open) {
    for (std::size_t m = 0; m < L; ++m) k[m] = pi * static_cast<double>(m + 1) / static_cast<double>(L + 1);
  } else {
    for (std::size_t m = 0; m < L; ++m) {
      double km = 2.0 * pi * static_cast<double>(m) / static_cast<double>(L);
      if (km > pi) km -= 2.0 * pi;
      k[m] = km;
    }
  }

  std::vector<double> omega(L);
  for (std::size_t m = 0; m < L; ++m) omega[m] = params.omega0 + 2.0 * params.J * std::cos(k[m]);

  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (omega[a] != omega[b]) return omega[a] < omega[b];
    return k[a] < k[b];
  });

  ModeSpectrum out;
  out.L = L;
  out.J = params.J;
  out.omega0 = params.omega0;
  out.boundary = params.boundary;
  out.k.resize(L);
  out.omega.resize(L);
  out.phi.resize(L * L);

  const double open_norm = std::sqrt(2.0 / static_cast<double>(L + 1));
  const double periodic_norm = 1.0 / std::sqrt(static_cast<double>(L));
  for (std::size_t m = 0; m < L; ++m) {
    const std::size_t src = order[m];
    out.k[m] = k[src];
    out.omega[m] = omega[src];
    for (std::size_t j = 0; j < L; ++j) {
      const double site = static_cast<double>(j + 1);
      out.phi[m * L + j] = params.boundary == Boundary::Open
                               ? std::complex<double>(open_norm * std::sin(k[src] * site), 0.0)
                               : std::polar(periodic_norm, k[src] * site);
    }
  }
  return out;
}

double density_of_states(double omega, double J) {
  if (!(J > 0.0)) throw InvalidParameter("density_of_states: J must be > 0");
  const double x = omega / (2.0 * J);
  if (!(std::abs(x) < 1.0))
    throw DomainError("density_of_states: omega = " + std::to_string(omega) +
                      " is outside the open band (-2J, 2J)");
  return 1.0 / (2.0 * std::numbers::pi * J * std::sqrt(1.0 - x * x));
}

double overlap_factor(const ModeSpectrum& spectrum, std::size_t k, std::size_t kp, GammaMode mode) {
  const std::size_t L = spectrum.L;
  if (k >= L || kp >= L) throw InvalidParameter("overlap_factor: mode index out of range");
  if (mode == GammaMode::Uniform) return 1.0 / static_cast<double>(L);
  double sum = 0.0;
  for (std::size_t j = 0; j < L; ++j)
    sum += std::norm(spectrum.amplitude(k, j)) * std::norm(spectrum.amplitude(kp, j));
  return sum;
}

std::vector<double> overlap_matrix(const ModeSpectrum& spectrum, GammaMode mode) {
  const std::size_t L = spectrum.L;
  std::vector<double> gamma(L * L, 1.0 / static_cast<double>(L));
  if (mode == GammaMode::Uniform) return gamma;

  std::vector<double> weight(L * L);
  for (std::size_t i = 0; i < L * L; ++i) weight[i] = std::norm(spectrum.phi[i]);

  const auto n = static_cast<long>(L);
#pragma omp parallel for schedule(static)
  for (long a = 0; a < n; ++a) {
    for (long b = a; b < n; ++b) {
      double sum = 0.0;
      for (std::size_t j = 0; j < L; ++j) sum += weight[a * L + j] * weight[b * L + j];
      gamma[a * L + b] = sum;
      gamma[b * L + a] = sum;
    }
  }
  return gamma;
}

}  // namespace boson_kinetics
