#include "boson_kinetics/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "boson_kinetics/errors.hpp"

namespace boson_kinetics {

GaussLegendre::GaussLegendre(std::size_t order) {
  if (order == 0) throw InvalidParameter("GaussLegendre: order must be >= 1");
  const auto n = static_cast<unsigned>(order);
  // Non-negative zeros in ascending order; mirror them for the full rule.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  auto weight = [n](double x) {
    const double d = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * d * d);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    nodes_.push_back(-*it);
    weights_.push_back(weight(*it));
  }
  for (double x : zeros) {
    nodes_.push_back(x);
    weights_.push_back(weight(x));
  }
}

const GaussLegendre& gauss_legendre(std::size_t order) {
  static std::mutex guard;
  static std::map<std::size_t, GaussLegendre> cache;
  const std::lock_guard lock(guard);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
  return it->second;
}

double band_integral(const std::function<double(double)>& f, double J, const GaussLegendre& rule,
                     double lo, double hi) {
  if (!(J > 0.0)) throw InvalidParameter("band_integral: J must be > 0");
  const double edge = 2.0 * J;
  lo = std::clamp(lo, -edge, edge);
  hi = std::clamp(hi, -edge, edge);
  const double theta_lo = std::asin(lo / edge);
  const double theta_hi = std::asin(hi / edge);
  return rule.integrate([&](double theta) { return f(edge * std::sin(theta)); }, theta_lo, theta_hi) /
         std::numbers::pi;
}

}  // namespace boson_kinetics
