#include "boson_kinetics/kinetics.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace boson_kinetics {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

Occupations Occupations::uniform(std::size_t L, double N) {
  if (L == 0) throw InvalidParameter("Occupations: L must be >= 1");
  if (!(N >= 0.0) || !std::isfinite(N)) throw InvalidParameter("Occupations: N must be >= 0");
  Occupations occ;
  occ.n.assign(L, N / static_cast<double>(L));
  occ.N = N;
  return occ;
}

Occupations Occupations::from(std::vector<double> n, double tau) {
  for (double v : n)
    if (!std::isfinite(v) || v < -1e-12) throw InvalidParameter("Occupations: entries must be finite and >= 0");
  Occupations occ;
  occ.n = std::move(n);
  occ.tau = tau;
  occ.N = occ.total();
  return occ;
}

double Occupations::total() const { return std::accumulate(n.begin(), n.end(), 0.0); }

namespace {

struct System {
  const RateContext* ctx;
  KernelPolicy policy;
  void operator()(const State& x, State& dxdt, double /*tau*/) const { rhs(x, *ctx, dxdt, policy); }
};

auto make_stepper(const EvolveOptions& options, double N) {
  const double abs_tol = options.abs_tol * std::max(N, 1e-300);
  return odeint::make_dense_output(abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
}

void check_start(const Occupations& n0, const RateContext& ctx) {
  if (n0.n.size() != ctx.L) throw InvalidParameter("kinetics: occupation size does not match the rate context");
  for (double v : n0.n)
    if (!std::isfinite(v) || v < -1e-12) throw InvalidParameter("kinetics: initial occupations must be >= 0");
}

std::string describe_state(const State& x) {
  std::ostringstream os;
  os << "[";
  const std::size_t shown = std::min<std::size_t>(x.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) os << (i ? ", " : "") << x[i];
  if (x.size() > shown) os << ", ...";
  os << "]";
  return os.str();
}

template <class Stepper>
std::pair<double, double> guarded_step(Stepper& stepper, const System& sys, const EvolveOptions& options) {
  try {
    auto interval = stepper.do_step(sys);
    if (stepper.current_time_step() < options.min_step) {
      throw StiffnessError("kinetics: step size underflow at tau = " + std::to_string(stepper.current_time()) +
                               ", state " + describe_state(stepper.current_state()),
                           {}, stepper.current_state());
    }
    return interval;
  } catch (const odeint::step_adjustment_error& e) {
    throw StiffnessError(std::string("kinetics: step size control failed: ") + e.what() + ", state " +
                             describe_state(stepper.current_state()),
                         {}, stepper.current_state());
  }
}

double drift_of(const State& x, double N) { return std::abs(std::accumulate(x.begin(), x.end(), 0.0) - N); }

bool has_negative(const State& x) {
  return std::any_of(x.begin(), x.end(), [](double v) { return v < -1e-12; });
}

// Newton iterations on f(n) = 0 with the last equation replaced by sum(n) = N.
State polish_steady_state(State n, const RateContext& ctx, double N, double& residual) {
  const std::size_t L = ctx.L;
  if (L < 2) return n;
  for (int iter = 0; iter < 8; ++iter) {
    const auto f = rhs(n, ctx);
    const auto jac = rhs_jacobian(n, ctx);
    Eigen::MatrixXd A(L, L);
    Eigen::VectorXd b(L);
    for (std::size_t r = 0; r < L; ++r) {
      for (std::size_t c = 0; c < L; ++c) A(r, c) = jac[r * L + c];
      b(r) = -f[r];
    }
    A.row(L - 1).setOnes();
    b(L - 1) = N - std::accumulate(n.begin(), n.end(), 0.0);
    const Eigen::VectorXd delta = A.fullPivLu().solve(b);
    if (!delta.allFinite()) break;

    State candidate = n;
    for (std::size_t i = 0; i < L; ++i) candidate[i] += delta(i);
    if (has_negative(candidate)) break;
    const double r = steady_residual(candidate, ctx, N);
    if (!(r < residual)) break;
    n = std::move(candidate);
    residual = r;
    if (residual < 1e-16) break;
  }
  return n;
}

}  // namespace

Trajectory evolve(const Occupations& n0, const RateContext& ctx, double tau_end,
                  std::span<const double> output_taus, const EvolveOptions& options) {
  check_start(n0, ctx);
  if (!(tau_end > 0.0)) throw InvalidParameter("evolve: tau_end must be > 0");
  std::vector<double> taus(output_taus.begin(), output_taus.end());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0) || taus[i] > tau_end) throw InvalidParameter("evolve: output tau outside [0, tau_end]");
    if (i > 0 && !(taus[i] > taus[i - 1])) throw InvalidParameter("evolve: output taus must be strictly increasing");
  }

  const double N = n0.N;
  Trajectory traj;
  State x = n0.n;
  const System sys{&ctx, options.kernel};

  auto record = [&](double tau, const State& s) {
    Occupations snap;
    snap.n = s;
    snap.tau = tau;
    snap.N = N;
    if (has_negative(s)) traj.positivity_violated = true;
    traj.snapshots.push_back(std::move(snap));
  };

  std::size_t next = 0;
  for (; next < taus.size() && taus[next] == 0.0; ++next) record(0.0, x);

  if (!ctx.coupled()) {
    for (; next < taus.size(); ++next) record(taus[next], x);
    traj.converged = true;
    return traj;
  }

  auto stepper = make_stepper(options, N);
  stepper.initialize(x, 0.0, std::min(options.initial_step, tau_end));
  State dense(ctx.L);
  while (stepper.current_time() < tau_end) {
    if (stepper.current_time() + stepper.current_time_step() > tau_end)
      stepper.initialize(stepper.current_state(), stepper.current_time(), tau_end - stepper.current_time());
    guarded_step(stepper, sys, options);
    ++traj.steps;
    traj.max_drift = std::max(traj.max_drift, drift_of(stepper.current_state(), N));
    while (next < taus.size() && taus[next] <= stepper.current_time()) {
      stepper.calc_state(taus[next], dense);
      record(taus[next], dense);
      ++next;
    }
    if (tau_end - stepper.current_time() < 1e-12 * tau_end) break;
  }
  for (; next < taus.size(); ++next) record(taus[next], stepper.current_state());
  traj.final_residual = steady_residual(stepper.current_state(), ctx, N);
  traj.converged = true;
  return traj;
}

double steady_residual(std::span<const double> n, const RateContext& ctx, double N) {
  const auto dn = rhs(n, ctx);
  double worst = 0.0;
  for (double v : dn) worst = std::max(worst, std::abs(v));
  return N > 0.0 ? worst / N : worst;
}

SteadyState find_steady_state(const Occupations& n0, const RateContext& ctx, const SteadyStateOptions& options) {
  check_start(n0, ctx);
  if (!ctx.coupled())
    throw ConvergenceError("find_steady_state: chi = 0, the bath does not couple to the array (no dynamics)");

  const double N = n0.N;
  SteadyState result;
  double residual = steady_residual(n0.n, ctx, N);
  if (residual < options.residual_tol) {
    result.state = n0;
    result.converged = true;
    result.residual = result.march_residual = residual;
    return result;
  }

  std::vector<ConvergenceError::ResidualSample> history{{0.0, residual}};
  double next_log = 1.0;
  const System sys{&ctx, options.evolve.kernel};
  auto stepper = make_stepper(options.evolve, N);
  stepper.initialize(n0.n, 0.0, options.evolve.initial_step);
  while (true) {
    guarded_step(stepper, sys, options.evolve);
    ++result.steps;
    const State& x = stepper.current_state();
    const double tau = stepper.current_time();
    result.max_drift = std::max(result.max_drift, drift_of(x, N));
    residual = steady_residual(x, ctx, N);
    if (tau >= next_log) {
      history.push_back({tau, residual});
      next_log *= 10.0;
    }
    if (residual < options.residual_tol) break;
    if (tau >= options.tau_max) {
      history.push_back({tau, residual});
      throw ConvergenceError("find_steady_state: residual " + std::to_string(residual) + " above tolerance at tau_max = " +
                                 std::to_string(options.tau_max),
                             std::move(history), x);
    }
  }

  State x = stepper.current_state();
  result.march_residual = residual;
  if (options.polish) x = polish_steady_state(std::move(x), ctx, N, residual);
  result.state.n = std::move(x);
  result.state.tau = stepper.current_time();
  result.state.N = N;
  result.converged = true;
  result.residual = residual;
  return result;
}

double early_time_rate(double omega_k, double n0_uniform, const LatticeParams& lattice,
                       const ReservoirParams& reservoir, const GaussLegendre& rule, std::optional<double> gamma) {
  validate(reservoir);
  if (lattice.L == 0 || !(lattice.J > 0.0)) throw InvalidParameter("early_time_rate: invalid lattice");
  const double J = lattice.J;
  if (!(std::abs(omega_k) < 2.0 * J)) throw DomainError("early_time_rate: omega_k outside the band");
  if (!(n0_uniform >= 0.0)) throw InvalidParameter("early_time_rate: n0 must be >= 0");
  const double g = gamma.value_or(1.0 / static_cast<double>(lattice.L));
  // Integrate over the final energy w' = w + omega_k, which runs over the whole band.
  const double integral = band_integral(
      [&](double w_final) {
        const double w = w_final - omega_k;
        return noise_spectrum(w, reservoir) - noise_spectrum(-w, reservoir);
      },
      J, rule);
  return g * n0_uniform * (n0_uniform + 1.0) * J * integral;
}

double early_time_rate(double omega_k, double n0_uniform, const LatticeParams& lattice,
                       const ReservoirParams& reservoir) {
  const GaussLegendre& rule = gauss_legendre(kDefaultBandNodes);
  return early_time_rate(omega_k, n0_uniform, lattice, reservoir, rule);
}

}  // namespace boson_kinetics
