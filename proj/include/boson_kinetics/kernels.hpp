// kernels.hpp: the golden-rule rate context and the O(L^2) kinetic right-hand side.
//
// Two implementations of the right-hand side are kept side by side:
//   rhs_reference  serial, accumulates each unordered pair's flux once with opposite signs
//   rhs_parallel   OpenMP over rows; each row re-evaluates the canonical pair flux, so
//                  F(k,k') = -F(k',k) bit for bit
// The reference implementation is the oracle for the parallel one in the tests and the
// baseline in bench/.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "boson_kinetics/lattice.hpp"
#include "boson_kinetics/reservoir.hpp"

namespace boson_kinetics {

struct RateContext {
  std::size_t L = 0;
  double J = 1.0;
  double chi_sq = 0.0;
  std::vector<double> gamma;     // row-major, symmetric
  std::vector<double> S_matrix;  // (k, k') -> S(omega_k - omega_k')

  double g(std::size_t a, std::size_t b) const { return gamma[a * L + b]; }
  double s(std::size_t a, std::size_t b) const { return S_matrix[a * L + b]; }
  bool coupled() const noexcept { return chi_sq > 0.0; }
};

RateContext build_rate_context(const ModeSpectrum& spectrum, const ReservoirParams& reservoir,
                               GammaMode gamma_mode = GammaMode::SiteResolved);

enum class KernelPolicy { Reference, Parallel };

// dn/dtau with tau = chi^2 t / J. Zero everywhere when chi = 0.
void rhs_reference(std::span<const double> n, const RateContext& ctx, std::span<double> dn);
void rhs_parallel(std::span<const double> n, const RateContext& ctx, std::span<double> dn);

inline void rhs(std::span<const double> n, const RateContext& ctx, std::span<double> dn,
                KernelPolicy policy = KernelPolicy::Reference) {
  if (policy == KernelPolicy::Parallel)
    rhs_parallel(n, ctx, dn);
  else
    rhs_reference(n, ctx, dn);
}

std::vector<double> rhs(std::span<const double> n, const RateContext& ctx,
                        KernelPolicy policy = KernelPolicy::Reference);

// Row-major Jacobian d(dn_k/dtau)/dn_j.
std::vector<double> rhs_jacobian(std::span<const double> n, const RateContext& ctx);

}  // namespace boson_kinetics
