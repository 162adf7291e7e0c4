// quadrature.hpp: fixed-order Gauss-Legendre rules and band integrals weighted by
// the 1D density of states.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace boson_kinetics {

class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t order);

  std::size_t order() const noexcept { return nodes_.size(); }
  // Nodes and weights on [-1, 1].
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr std::size_t kDefaultBandNodes = 2048;

// Shared, lazily built rule of the given order (thread-safe).
const GaussLegendre& gauss_legendre(std::size_t order);

// Integral of D(w) f(w) over (lo, hi) inside the band [-2J, 2J], evaluated with the
// substitution w = 2J sin(theta), for which D(w) dw = dtheta / pi. The band-edge
// divergence of D is absorbed exactly.
double band_integral(const std::function<double(double)>& f, double J, const GaussLegendre& rule,
                     double lo, double hi);

inline double band_integral(const std::function<double(double)>& f, double J,
                            const GaussLegendre& rule) {
  return band_integral(f, J, rule, -2.0 * J, 2.0 * J);
}

}  // namespace boson_kinetics
