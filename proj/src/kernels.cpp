#include "boson_kinetics/kernels.hpp"

#include <algorithm>

#include "boson_kinetics/errors.hpp"

namespace boson_kinetics {

namespace {

// Net flux into mode a from mode b (a < b), per unit chi^2 / J.
inline double pair_flux(const RateContext& ctx, std::size_t a, std::size_t b, double na, double nb) {
  return ctx.J * ctx.g(a, b) * (ctx.s(b, a) * nb * (na + 1.0) - ctx.s(a, b) * na * (nb + 1.0));
}

void check_sizes(std::span<const double> n, const RateContext& ctx, std::span<double> dn) {
  if (n.size() != ctx.L || dn.size() != ctx.L)
    throw InvalidParameter("rhs: occupation vector size does not match the rate context");
}

}  // namespace

RateContext build_rate_context(const ModeSpectrum& spectrum, const ReservoirParams& reservoir,
                               GammaMode gamma_mode) {
  validate(reservoir);
  RateContext ctx;
  ctx.L = spectrum.L;
  ctx.J = spectrum.J;
  ctx.chi_sq = reservoir.chi * reservoir.chi;
  ctx.gamma = overlap_matrix(spectrum, gamma_mode);
  ctx.S_matrix.resize(ctx.L * ctx.L);
  for (std::size_t a = 0; a < ctx.L; ++a)
    for (std::size_t b = 0; b < ctx.L; ++b)
      ctx.S_matrix[a * ctx.L + b] = noise_spectrum(spectrum.omega[a] - spectrum.omega[b], reservoir);
  return ctx;
}

void rhs_reference(std::span<const double> n, const RateContext& ctx, std::span<double> dn) {
  check_sizes(n, ctx, dn);
  std::fill(dn.begin(), dn.end(), 0.0);
  if (!ctx.coupled()) return;
  const std::size_t L = ctx.L;
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = a + 1; b < L; ++b) {
      const double f = pair_flux(ctx, a, b, n[a], n[b]);
      dn[a] += f;
      dn[b] -= f;
    }
  }
}

void rhs_parallel(std::span<const double> n, const RateContext& ctx, std::span<double> dn) {
  check_sizes(n, ctx, dn);
  if (!ctx.coupled()) {
    std::fill(dn.begin(), dn.end(), 0.0);
    return;
  }
  const auto L = static_cast<long>(ctx.L);
#pragma omp parallel for schedule(static)
  for (long a = 0; a < L; ++a) {
    double acc = 0.0;
    for (long b = 0; b < L; ++b) {
      if (b == a) continue;
      if (a < b)
        acc += pair_flux(ctx, a, b, n[a], n[b]);
      else
        acc -= pair_flux(ctx, b, a, n[b], n[a]);
    }
    dn[a] = acc;
  }
}

std::vector<double> rhs(std::span<const double> n, const RateContext& ctx, KernelPolicy policy) {
  std::vector<double> dn(n.size());
  rhs(n, ctx, dn, policy);
  return dn;
}

std::vector<double> rhs_jacobian(std::span<const double> n, const RateContext& ctx) {
  const std::size_t L = ctx.L;
  if (n.size() != L) throw InvalidParameter("rhs_jacobian: size mismatch");
  std::vector<double> jac(L * L, 0.0);
  if (!ctx.coupled()) return jac;
  for (std::size_t k = 0; k < L; ++k) {
    double diag = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      if (j == k) continue;
      const double g = ctx.J * ctx.g(k, j);
      diag += g * (ctx.s(j, k) * n[j] - ctx.s(k, j) * (n[j] + 1.0));
      jac[k * L + j] = g * (ctx.s(j, k) * (n[k] + 1.0) - ctx.s(k, j) * n[k]);
    }
    jac[k * L + k] = diag;
  }
  return jac;
}

}  // namespace boson_kinetics
