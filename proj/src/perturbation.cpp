#include "boson_kinetics/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/quadrature.hpp"

namespace boson_kinetics {

double bose_einstein(double omega, double beta0, double mu) {
  const double x = beta0 * (omega - mu);
  if (!(x > 0.0))
    throw DomainError("bose_einstein: beta0 (omega - mu) = " + std::to_string(x) +
                      " must be > 0 (mu on the wrong side of the band)");
  return 1.0 / std::expm1(x);
}

namespace {

constexpr double kMaxExponent = 700.0;
constexpr double kEdgeGap = 1e-12;

// Sum of n_BE with mu = edge - sign(beta0) * gap; the offset is kept separate from the
// mode energies so that modes close to mu do not lose digits.
double occupation_sum(const ModeSpectrum& spectrum, double beta0, double edge, double gap) {
  const double b = std::abs(beta0);
  double sum = 0.0;
  for (double w : spectrum.omega) {
    const double dist = beta0 > 0.0 ? (w - edge) : (edge - w);
    sum += 1.0 / std::expm1(b * (dist + gap));
  }
  return sum;
}

}  // namespace

double solve_chemical_potential(const ModeSpectrum& spectrum, double N, double beta0) {
  if (!(N > 0.0) || !std::isfinite(N)) throw InvalidParameter("solve_chemical_potential: N must be > 0");
  if (beta0 == 0.0)
    throw DomainError("solve_chemical_potential: beta0 = 0 has no chemical potential (uniform N/L limit)");
  if (!std::isfinite(beta0)) throw InvalidParameter("solve_chemical_potential: beta0 must be finite");
  const auto [lo_it, hi_it] = std::minmax_element(spectrum.omega.begin(), spectrum.omega.end());
  const double edge = beta0 > 0.0 ? *lo_it : *hi_it;
  const double sign = beta0 > 0.0 ? -1.0 : 1.0;

  // Bisection on log(gap); the sum decreases monotonically with the gap.
  double log_small = std::log(kEdgeGap * spectrum.J);
  double log_large = std::log(kMaxExponent / std::abs(beta0));
  const double tol = 1e-10 * N;
  double best_gap = std::exp(0.5 * (log_small + log_large));
  double best_err = std::abs(occupation_sum(spectrum, beta0, edge, best_gap) - N);
  for (int iter = 0; iter < 400; ++iter) {
    const double log_mid = 0.5 * (log_small + log_large);
    const double gap = std::exp(log_mid);
    const double err = occupation_sum(spectrum, beta0, edge, gap) - N;
    if (std::abs(err) < best_err) {
      best_err = std::abs(err);
      best_gap = gap;
    }
    if (std::abs(err) < 0.01 * tol) break;
    if (err > 0.0)
      log_small = log_mid;
    else
      log_large = log_mid;
    if (log_large - log_small < 1e-17) break;
  }
  return edge + sign * best_gap;
}

double deformation_polynomial(double omega, double J, const ReservoirParams& r) {
  if (r.Delta == 0.0) throw DomainError("deformation_polynomial: singular at Delta = 0");
  const double b0 = base_inverse_temperature(r);
  return b0 * b0 / (36.0 * r.Delta) * (3.0 + b0 * r.Delta) * (omega * omega + 18.0 * J * J) * omega;
}

PerturbativeSolution deformed_distribution(const ModeSpectrum& spectrum, double N, const ReservoirParams& reservoir) {
  validate(reservoir);
  const double b0 = base_inverse_temperature(reservoir);
  if (reservoir.Delta == 0.0 || b0 == 0.0)
    throw DomainError("deformed_distribution: degenerate expansion at Delta = 0 (beta0 = 0)");

  PerturbativeSolution sol;
  sol.beta0 = b0;
  sol.mu = solve_chemical_potential(spectrum, N, b0);
  const std::size_t L = spectrum.L;
  sol.n_be.resize(L);
  sol.n.resize(L);

  std::vector<double> weight(L), poly(L);
  double sum_w = 0.0, sum_wa = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const double nb = bose_einstein(spectrum.omega[k], b0, sol.mu);
    sol.n_be[k] = nb;
    weight[k] = nb * (nb + 1.0);
    poly[k] = deformation_polynomial(spectrum.omega[k], spectrum.J, reservoir);
    sum_w += weight[k];
    sum_wa += weight[k] * poly[k];
  }
  sol.C = sum_w > 0.0 ? sum_wa / sum_w : 0.0;
  sol.c_minus_form = sol.C * std::exp(b0 * sol.mu);
  sol.c_plus_form = sol.C * std::exp(-b0 * sol.mu);
  for (std::size_t k = 0; k < L; ++k) {
    sol.n[k] = sol.n_be[k] - weight[k] * (poly[k] - sol.C);
    if (sol.n[k] < 0.0) sol.outside_perturbative_regime = true;
  }
  return sol;
}

PerturbativeSolution deformed_or_uniform(const ModeSpectrum& spectrum, double N, const ReservoirParams& reservoir) {
  validate(reservoir);
  if (reservoir.Delta != 0.0) return deformed_distribution(spectrum, N, reservoir);
  PerturbativeSolution sol;
  sol.infinite_temperature = true;
  sol.mu = std::nan("");
  sol.n_be.assign(spectrum.L, N / static_cast<double>(spectrum.L));
  sol.n = sol.n_be;
  return sol;
}

double energy_dependent_beta(double omega, double J, const ReservoirParams& r) {
  if (r.Delta == 0.0) throw DomainError("energy_dependent_beta: singular at Delta = 0");
  const double b0 = base_inverse_temperature(r);
  return b0 * (1.0 + b0 / (36.0 * r.Delta) * (3.0 + b0 * r.Delta) * (omega * omega + 18.0 * J * J));
}

namespace {

template <class F>
double derivative(F&& f, double x, double h) {
  const double coarse = (f(x + h) - f(x - h)) / (2.0 * h);
  const double fine = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * fine - coarse) / 3.0;
}

double relative(double residual, std::initializer_list<double> terms) {
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual);
}

}  // namespace

OdeResiduals residual_supplemental_odes(const PerturbativeSolution& sol, double J, const ReservoirParams& reservoir,
                                        double band_fraction, std::size_t points) {
  if (sol.infinite_temperature) throw DomainError("residual_supplemental_odes: no expansion at beta0 = 0");
  if (points < 2) throw InvalidParameter("residual_supplemental_odes: need at least two grid points");
  const double b0 = sol.beta0;
  const double mu = sol.mu;
  const double C = sol.C;
  const double h = 1e-5 * J;
  const double source = b0 * b0 * (3.0 + b0 * reservoir.Delta) / (12.0 * reservoir.Delta);

  auto n0 = [&](double w) { return bose_einstein(w, b0, mu); };
  auto n1 = [](double) { return 0.0; };
  auto n2 = [&](double w) {
    const double nb = n0(w);
    return -nb * (nb + 1.0) * (deformation_polynomial(w, J, reservoir) - C);
  };

  OdeResiduals out;
  const double span = 2.0 * J * band_fraction;
  for (std::size_t i = 0; i < points; ++i) {
    const double w = -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v0 = n0(w);
    const double d0 = derivative(n0, w, h);
    const double t0 = b0 * v0 * (v0 + 1.0);
    out.zeroth = std::max(out.zeroth, relative(d0 + t0, {d0, t0}));

    const double d1 = derivative(n1, w, h);
    const double t1 = b0 * n1(w) * (v0 + 1.0);
    out.first = std::max(out.first, relative(d1 + t1, {d1, t1}));

    const double v2 = n2(w);
    const double d2 = derivative(n2, w, h);
    const double t2a = b0 * v2 * (2.0 * v0 + 1.0);
    const double t2b = source * (6.0 * J * J + w * w) * v0 * (v0 + 1.0);
    out.second = std::max(out.second, relative(d2 + t2a + t2b, {d2, t2a, t2b}));
  }
  return out;
}

double continuum_steady_residual(const std::vector<double>& n, const ModeSpectrum& spectrum,
                                 const ReservoirParams& reservoir) {
  const std::size_t L = spectrum.L;
  if (L < 3) throw InvalidParameter("continuum_steady_residual: L < 3 has no band continuum");
  if (n.size() != L) throw InvalidParameter("continuum_steady_residual: size mismatch");
  const double J = spectrum.J;
  const double edge = 2.0 * J;

  // Interpolation nodes in theta = asin((w - omega0) / 2J); degenerate modes are averaged.
  std::vector<double> theta, value;
  for (std::size_t k = 0; k < L;) {
    std::size_t end = k;
    double acc = 0.0;
    while (end < L && spectrum.omega[end] == spectrum.omega[k]) acc += n[end++];
    theta.push_back(std::asin(std::clamp((spectrum.omega[k] - spectrum.omega0) / edge, -1.0, 1.0)));
    value.push_back(acc / static_cast<double>(end - k));
    k = end;
  }
  auto interp = [&](double t) {
    std::size_t hi = std::upper_bound(theta.begin(), theta.end(), t) - theta.begin();
    hi = std::clamp<std::size_t>(hi, 1, theta.size() - 1);
    const std::size_t lo = hi - 1;
    const double frac = (t - theta[lo]) / (theta[hi] - theta[lo]);
    return std::max(0.0, value[lo] + frac * (value[hi] - value[lo]));
  };

  const GaussLegendre& rule = gauss_legendre(kDefaultBandNodes);
  double worst = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const double wk = spectrum.omega[k];
    const double nk = n[k];
    const double r = band_integral(
        [&](double eps) {
          const double w_final = eps + spectrum.omega0;
          const double np = interp(std::asin(eps / edge));
          const double w = w_final - wk;
          return noise_spectrum(w, reservoir) * np * (nk + 1.0) - noise_spectrum(-w, reservoir) * nk * (np + 1.0);
        },
        J, rule);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace boson_kinetics
