#include "boson_kinetics/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "boson_kinetics/errors.hpp"

namespace boson_kinetics {

KlResult kl_divergence(std::span<const double> n_ref, std::span<const double> n_approx) {
  if (n_ref.size() != n_approx.size() || n_ref.empty())
    throw InvalidParameter("kl_divergence: distributions must be non-empty and of equal length");
  double total_ref = 0.0;
  for (double v : n_ref) {
    if (!(v >= 0.0)) throw InvalidParameter("kl_divergence: reference occupations must be >= 0");
    total_ref += v;
  }
  if (!(total_ref > 0.0)) throw InvalidParameter("kl_divergence: reference distribution is empty");

  double total_approx = 0.0;
  for (double v : n_approx)
    if (v > 0.0) total_approx += v;
  if (!(total_approx > 0.0)) throw DomainError("kl_divergence: approximant has no positive entries");
  // Normalize the approximant with its full sum so that a negative entry does not
  // silently renormalize the rest.
  const double norm_approx = std::accumulate(n_approx.begin(), n_approx.end(), 0.0);
  const double q_norm = norm_approx > 0.0 ? norm_approx : total_approx;

  KlResult out;
  for (std::size_t k = 0; k < n_ref.size(); ++k) {
    if (n_ref[k] <= 0.0) continue;
    if (n_approx[k] <= 0.0) {
      out.excluded_modes.push_back(k);
      continue;
    }
    const double p = n_ref[k] / total_ref;
    const double q = n_approx[k] / q_norm;
    out.value += p * std::log(p / q);
  }
  return out;
}

KlRatio kl_ratio(std::span<const double> n_ref, std::span<const double> n_pert, std::span<const double> n_be) {
  KlRatio out;
  const auto pert = kl_divergence(n_ref, n_pert);
  const auto be = kl_divergence(n_ref, n_be);
  out.kl_pert = pert.value;
  out.kl_be = be.value;
  out.reliable = pert.reliable() && be.reliable();
  if (pert.value == 0.0) {
    out.infinite = true;
    out.R = std::numeric_limits<double>::infinity();
  } else {
    out.R = be.value / pert.value;
  }
  return out;
}

double ground_vs_top(std::span<const double> n) {
  if (n.size() < 2) throw InvalidParameter("ground_vs_top: need at least two modes");
  return n.front() - n.back();
}

TemperatureFit fit_inverse_temperature(std::span<const double> n, const ModeSpectrum& spectrum) {
  const std::size_t L = n.size();
  if (L != spectrum.L) throw InvalidParameter("fit_inverse_temperature: size mismatch");
  if (L < 2) throw InvalidParameter("fit_inverse_temperature: need at least two modes");
  std::vector<double> y(L);
  for (std::size_t k = 0; k < L; ++k) {
    if (!(n[k] > 0.0)) throw DomainError("fit_inverse_temperature: occupations must be > 0");
    y[k] = std::log1p(1.0 / n[k]);
  }
  const double count = static_cast<double>(L);
  const double mean_x = std::accumulate(spectrum.omega.begin(), spectrum.omega.end(), 0.0) / count;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const double dx = spectrum.omega[k] - mean_x;
    sxx += dx * dx;
    sxy += dx * (y[k] - mean_y);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_inverse_temperature: all mode energies coincide");
  TemperatureFit fit;
  fit.beta = sxy / sxx;
  const double intercept = mean_y - fit.beta * mean_x;
  fit.mu = fit.beta != 0.0 ? -intercept / fit.beta : std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < L; ++k)
    fit.max_residual = std::max(fit.max_residual, std::abs(y[k] - (intercept + fit.beta * spectrum.omega[k])));
  return fit;
}

}  // namespace boson_kinetics
