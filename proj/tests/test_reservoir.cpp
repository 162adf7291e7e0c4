#include <cmath>
#include <random>

#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/quadrature.hpp"
#include "boson_kinetics/reservoir.hpp"
#include "doctest.h"

using namespace boson_kinetics;

namespace {
const ReservoirParams kFig2{1e-3, 0.1, -3.0, 1.0};
}

TEST_CASE("steady cavity amplitude") {
  CHECK(steady_amplitude_sq({1e-3, 0.0, -3.0, 1.0}) == 0.0);
  CHECK(steady_amplitude_sq(kFig2) == doctest::Approx(0.01 / 9.25).epsilon(1e-14));
  CHECK(steady_amplitude_sq(kFig2) == doctest::Approx(1.08108e-3).epsilon(1e-5));
  ReservoirParams flipped = kFig2;
  flipped.Delta = 3.0;
  CHECK(steady_amplitude_sq(flipped) == steady_amplitude_sq(kFig2));
}

TEST_CASE("noise spectrum peak and symmetries") {
  const double peak = noise_spectrum(3.0, kFig2);
  CHECK(peak == doctest::Approx(4.0 * steady_amplitude_sq(kFig2) / kFig2.kappa).epsilon(1e-14));
  CHECK(peak == doctest::Approx(4.3243e-3).epsilon(1e-4));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-10.0, 10.0);
  ReservoirParams resonant = kFig2;
  resonant.Delta = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double v = x(rng);
    CHECK(noise_spectrum(3.0 + v, kFig2) == doctest::Approx(noise_spectrum(3.0 - v, kFig2)).epsilon(1e-14));
    CHECK(noise_spectrum(v, resonant) == noise_spectrum(-v, resonant));
    CHECK(noise_spectrum(v, kFig2) > 0.0);
    CHECK(noise_spectrum(v, kFig2) <= peak);
  }
}

TEST_CASE("Lorentzian normalization") {
  // Integral of S over the real line is 2 pi |a0|^2; substitute w = -Delta + (kappa/2) tan(t).
  const auto& rule = gauss_legendre(512);
  for (double kappa : {0.1, 1.0, 4.0}) {
    ReservoirParams p{1e-3, 0.1, -2.0, kappa};
    const double integral = rule.integrate(
        [&](double t) {
          const double w = -p.Delta + 0.5 * kappa * std::tan(t);
          const double jac = 0.5 * kappa / (std::cos(t) * std::cos(t));
          return noise_spectrum(w, p) * jac;
        },
        -M_PI / 2, M_PI / 2);
    CHECK(integral == doctest::Approx(2.0 * M_PI * steady_amplitude_sq(p)).epsilon(1e-6));
  }
}

TEST_CASE("base inverse temperature") {
  CHECK(base_inverse_temperature(kFig2) == doctest::Approx(12.0 / 9.25).epsilon(1e-14));
  CHECK(base_inverse_temperature({1e-3, 0.1, 0.0, 1.0}) == 0.0);
  CHECK(base_inverse_temperature({1e-3, 0.1, 2.0, 1.0}) < 0.0);
  CHECK(base_inverse_temperature({1e-3, 0.1, -0.5, 3.0}) > 0.0);
}

TEST_CASE("exact Stokes temperature") {
  // ln(16.25 / 4.25), direct evaluation of the two Lorentzian denominators.
  CHECK(effective_beta_exact(1.0, kFig2) == doctest::Approx(1.3411739258394210).epsilon(1e-13));
  // omega -> 0 continues to beta0 (series oracle: d/dw ln(S(w)/S(-w)) at 0 = 1.2972972...).
  CHECK(effective_beta_exact(0.0, kFig2) == doctest::Approx(1.2972972972972973).epsilon(1e-15));
  CHECK(effective_beta_exact(1e-6, kFig2) == doctest::Approx(1.2972972972972973).epsilon(1e-9));
  ReservoirParams resonant = kFig2;
  resonant.Delta = 0.0;
  CHECK(effective_beta_exact(0.7, resonant) == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double v = w(rng);
    CHECK(std::abs(effective_beta_exact(v, kFig2) - effective_beta_exact(-v, kFig2)) < 1e-12);
    // S(w)/S(-w) = exp(w beta_eff(w)) by construction
    if (v > 1e-6)
      CHECK(noise_spectrum(v, kFig2) / noise_spectrum(-v, kFig2) ==
            doctest::Approx(std::exp(v * effective_beta_exact(v, kFig2))).epsilon(1e-12));
    CHECK(effective_beta_exact(v, kFig2) > 0.0);
  }
}

TEST_CASE("Stokes temperature expansion") {
  CHECK(effective_beta_expansion(0.0, kFig2) == base_inverse_temperature(kFig2));
  const double exact = effective_beta_exact(1.0, kFig2);
  CHECK(std::abs(effective_beta_expansion(1.0, kFig2) - exact) / exact < 0.01);

  // Special point Delta = -sqrt(3) kappa / 2: the correction vanishes.
  for (double kappa : {0.5, 1.0, 3.0}) {
    ReservoirParams special{1e-3, 0.1, -std::sqrt(3.0) * kappa / 2.0, kappa};
    CHECK(std::abs(curvature_factor(special)) < 1e-14);
    for (double w : {0.3, 1.0, 2.5})
      CHECK(effective_beta_expansion(w, special) ==
            doctest::Approx(base_inverse_temperature(special)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(effective_beta_expansion(1.0, {1e-3, 0.1, 0.0, 1.0}), DomainError);
}

TEST_CASE("curvature factor vanishes only on the special lines") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> kap(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double kappa = kap(rng);
    const double line = std::sqrt(3.0) * kappa / 2.0;
    CHECK(std::abs(curvature_factor({0.0, 0.1, line, kappa})) < 1e-13);
    CHECK(std::abs(curvature_factor({0.0, 0.1, -line, kappa})) < 1e-13);
    CHECK(std::abs(curvature_factor({0.0, 0.1, 1.3 * line, kappa})) > 1e-3);
  }
}

TEST_CASE("reservoir validation") {
  CHECK_THROWS_AS(validate(ReservoirParams{1e-3, 0.1, -3.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(validate(ReservoirParams{1e-3, -0.1, -3.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(validate(ReservoirParams{-1e-3, 0.1, -3.0, 1.0}), InvalidParameter);
  CHECK_NOTHROW(validate(kFig2));
}
