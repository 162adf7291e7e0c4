#include <cmath>
#include <numeric>
#include <random>

#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/kinetics.hpp"
#include "boson_kinetics/perturbation.hpp"
#include "doctest.h"

using namespace boson_kinetics;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("Bose-Einstein occupation") {
  CHECK(bose_einstein(1.0, 1.0, 0.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-15));
  CHECK(bose_einstein(-1.0, -2.0, 0.5) == doctest::Approx(1.0 / (std::exp(3.0) - 1.0)).epsilon(1e-15));
  CHECK(bose_einstein(1e-10, 1.0, 0.0) == doctest::Approx(1e10).epsilon(1e-9));
  CHECK_THROWS_AS(bose_einstein(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(bose_einstein(0.0, -1.0, -0.5), DomainError);
}

TEST_CASE("chemical potential of a single mode") {
  const auto spec = build_modes({1, 1.0, 0.0, Boundary::Open});
  for (double beta0 : {0.05, 1.0, -0.7}) {
    for (double N : {0.1, 3.0, 250.0}) {
      const double mu = solve_chemical_potential(spec, N, beta0);
      const double expect = spec.omega[0] - std::log1p(1.0 / N) / beta0;
      CHECK(mu == doctest::Approx(expect).epsilon(1e-9).scale(1e-9));
    }
  }
}

TEST_CASE("chemical potential normalizes and moves toward the filled edge") {
  const auto spec = build_modes({100, 1.0, 0.0, Boundary::Open});
  for (double beta0 : {1.3, -0.4}) {
    double previous = beta0 > 0 ? -1e300 : 1e300;
    for (double N : {1.0, 10.0, 50.0, 500.0}) {
      const double mu = solve_chemical_potential(spec, N, beta0);
      double total = 0.0;
      for (double w : spec.omega) total += bose_einstein(w, beta0, mu);
      CHECK(std::abs(total - N) <= 1e-9 * N);
      if (beta0 > 0) {
        CHECK(mu < spec.omega.front());
        CHECK(mu > previous);
      } else {
        CHECK(mu > spec.omega.back());
        CHECK(mu < previous);
      }
      previous = mu;
    }
  }
  CHECK_THROWS_AS(solve_chemical_potential(spec, 10.0, 0.0), DomainError);
  CHECK_THROWS_AS(solve_chemical_potential(spec, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("deformed distribution keeps N and the constant is the weighted mean") {
  const auto spec = build_modes({100, 1.0, 0.0, Boundary::Open});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> delta(-6.0, -0.5), kappa(0.5, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    const ReservoirParams res{1e-3, 0.1, delta(rng), kappa(rng)};
    const auto sol = deformed_distribution(spec, 50.0, res);
    CHECK(std::abs(sum(sol.n) - 50.0) <= 1e-8);
    CHECK(std::abs(sum(sol.n_be) - 50.0) <= 1e-8);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < spec.L; ++k) {
      const double w = sol.n_be[k] * (sol.n_be[k] + 1.0);
      num += w * deformation_polynomial(spec.omega[k], 1.0, res);
      den += w;
    }
    CHECK(sol.C == doctest::Approx(num / den).epsilon(1e-12));
    CHECK(sol.c_minus_form == doctest::Approx(sol.C * std::exp(sol.beta0 * sol.mu)).epsilon(1e-12));
    CHECK(sol.c_plus_form == doctest::Approx(sol.C * std::exp(-sol.beta0 * sol.mu)).epsilon(1e-12));
  }
}

TEST_CASE("deformation vanishes on the curvature-free line") {
  const auto spec = build_modes({100, 1.0, 0.0, Boundary::Open});
  const double kappa = 2.0;
  const ReservoirParams res{1e-3, 0.1, -std::sqrt(3.0) * kappa / 2.0, kappa};
  const auto sol = deformed_distribution(spec, 50.0, res);
  for (std::size_t k = 0; k < spec.L; ++k) CHECK(std::abs(sol.n[k] - sol.n_be[k]) <= 1e-12 * sol.n_be[k]);
  CHECK(std::abs(energy_dependent_beta(1.3, 1.0, res) - sol.beta0) <= 1e-12 * std::abs(sol.beta0));
}

TEST_CASE("resonant drive") {
  const auto spec = build_modes({10, 1.0, 0.0, Boundary::Open});
  const ReservoirParams res{1e-3, 0.1, 0.0, 1.0};
  CHECK_THROWS_AS(deformed_distribution(spec, 5.0, res), DomainError);
  const auto sol = deformed_or_uniform(spec, 5.0, res);
  CHECK(sol.infinite_temperature);
  CHECK(std::isnan(sol.mu));
  for (double v : sol.n) CHECK(v == 0.5);
  CHECK_THROWS_AS(energy_dependent_beta(0.0, 1.0, res), DomainError);
}

TEST_CASE("energy-dependent inverse temperature") {
  const ReservoirParams res{1e-3, 0.1, -3.0, 1.0};
  const double b0 = base_inverse_temperature(res);
  CHECK(energy_dependent_beta(0.0, 1.0, res) ==
        doctest::Approx(b0 * (1.0 + b0 * (3.0 + b0 * res.Delta) / (2.0 * res.Delta))).epsilon(1e-14));
  CHECK(energy_dependent_beta(0.8, 1.0, res) == energy_dependent_beta(-0.8, 1.0, res));
  // d(w beta(w))/dw is the local slope of the deformed exponent
  for (double w : {-1.5, -0.2, 0.9, 1.7}) {
    const double h = 1e-4;
    const double slope =
        ((w + h) * energy_dependent_beta(w + h, 1.0, res) - (w - h) * energy_dependent_beta(w - h, 1.0, res)) /
        (2 * h);
    const double expect = b0 * (1.0 + b0 * (3.0 + b0 * res.Delta) * (w * w + 6.0) / (12.0 * res.Delta));
    CHECK(slope == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("order-by-order equations") {
  const auto spec = build_modes({100, 1.0, 0.0, Boundary::Open});
  for (const ReservoirParams res : {ReservoirParams{1e-3, 0.1, -3.0, 1.0}, ReservoirParams{1e-3, 0.1, 2.0, 3.0},
                                    ReservoirParams{1e-3, 0.1, -1.0, 0.5}}) {
    const auto sol = deformed_distribution(spec, 50.0, res);
    const auto r = residual_supplemental_odes(sol, 1.0, res);
    CHECK(r.zeroth < 1e-6);
    CHECK(r.first == 0.0);
    CHECK(r.second < 1e-6);
  }
}

TEST_CASE("continuum steady-state condition") {
  const auto small = build_modes({2, 1.0, 0.0, Boundary::Open});
  CHECK_THROWS_AS(continuum_steady_residual({1.0, 1.0}, small, {1e-3, 0.1, -3.0, 1.0}), InvalidParameter);

  const auto spec = build_modes({100, 1.0, 0.0, Boundary::Open});
  const std::vector<double> flat(100, 0.5);
  CHECK(continuum_steady_residual(flat, spec, {1e-3, 0.1, 0.0, 1.0}) < 1e-14);

  const ReservoirParams res{1e-3, 0.1, -3.0, 1.0};
  const auto ctx = build_rate_context(spec, res, GammaMode::Uniform);
  const auto ss = find_steady_state(Occupations::uniform(100, 50.0), ctx);
  const double relaxed = continuum_steady_residual(ss.state.n, spec, res);
  const double start = continuum_steady_residual(flat, spec, res);
  CHECK(relaxed * 100.0 <= start);
}
