#include "boson_kinetics/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/quadrature.hpp"
#include "json.hpp"

namespace boson_kinetics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double metric_value(const SingleRunResult& r, const std::string& metric) {
  if (metric == "kl") return r.report.kl_vs_perturbative;
  if (metric == "kl_be") return r.report.kl_vs_be;
  if (metric == "R") return r.report.ratio_R;
  if (metric == "delta_n") return r.report.delta_n;
  if (metric == "fitted_beta") return r.report.fitted_beta;
  throw ConfigError("unknown metric '" + metric + "'");
}

bool is_fixed_column(const std::string& name) { return name == "delta_over_J" || name == "kappa_over_J"; }

std::vector<const SweepAxis*> axes_of(const SweepSpec& spec) {
  std::vector<const SweepAxis*> axes{&spec.axis1};
  if (spec.axis2) axes.push_back(&*spec.axis2);
  return axes;
}

}  // namespace

SingleRunResult compute_single(const RunConfig& config) {
  validate(config);
  SingleRunResult out;
  out.config = config;
  out.spectrum = build_modes(config.lattice());
  const auto reservoir = config.reservoir();
  const auto ctx = build_rate_context(out.spectrum, reservoir, config.gamma_mode);
  out.steady = find_steady_state(Occupations::uniform(config.L, config.N), ctx, config.steady_options());
  out.N_drift = out.steady.state.total() - config.N;

  out.perturbative = deformed_or_uniform(out.spectrum, config.N, reservoir);
  if (reservoir.Delta != 0.0)
    for (double w : out.spectrum.omega) out.beta_of_omega.push_back(energy_dependent_beta(w, out.spectrum.J, reservoir));

  const auto& n = out.steady.state.n;
  auto& rep = out.report;
  const auto pert = kl_divergence(n, out.perturbative.n);
  const auto be = kl_divergence(n, out.perturbative.n_be);
  rep.kl_vs_perturbative = pert.value;
  rep.kl_vs_be = be.value;
  rep.excluded_modes = pert.excluded_modes;
  out.kl_reliable = pert.reliable() && be.reliable();
  const auto ratio = kl_ratio(n, out.perturbative.n, out.perturbative.n_be);
  rep.ratio_R = ratio.R;
  out.ratio_infinite = ratio.infinite;
  rep.delta_n = config.L >= 2 ? ground_vs_top(n) : 0.0;
  try {
    const auto fit = fit_inverse_temperature(n, out.spectrum);
    rep.fitted_beta = fit.beta;
    rep.fitted_mu = fit.mu;
  } catch (const std::exception&) {
    rep.fitted_beta = kNaN;
    rep.fitted_mu = kNaN;
  }
  return out;
}

SweepResult compute_sweep(const RunConfig& config, const SweepSpec& spec, int threads) {
  RunConfig base = config;
  base.sweep = spec;
  validate(base);
  base.sweep.reset();

  SweepResult result;
  result.spec = spec;
  const std::vector<double> inner = spec.axis2 ? spec.axis2->values : std::vector<double>{kNaN};
  for (double a : spec.axis1.values) {
    for (double b : inner) {
      SweepRow row;
      row.cell = base;
      row.axis_values.push_back(a);
      if (spec.axis2) row.axis_values.push_back(b);
      row.metrics.assign(spec.metrics.size(), kNaN);
      result.rows.push_back(std::move(row));
    }
  }

  const auto cells = static_cast<long>(result.rows.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(threads, 1))
  for (long i = 0; i < cells; ++i) {
    SweepRow& row = result.rows[i];
    try {
      set_parameter(row.cell, spec.axis1.name, row.axis_values[0]);
      if (spec.axis2) set_parameter(row.cell, spec.axis2->name, row.axis_values[1]);
      const auto single = compute_single(row.cell);
      for (std::size_t m = 0; m < spec.metrics.size(); ++m) row.metrics[m] = metric_value(single, spec.metrics[m]);
      if (!single.kl_reliable) row.error = "kl excludes modes with non-positive approximant";
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return result;
}

Trajectory compute_snapshots(const RunConfig& config) {
  validate(config);
  if (config.snapshot_taus.empty()) throw ConfigError("evolution.snapshot_taus: at least one snapshot time is required");
  const auto spectrum = build_modes(config.lattice());
  const auto ctx = build_rate_context(spectrum, config.reservoir(), config.gamma_mode);
  const double tau_end = config.snapshot_taus.back();
  const auto start = Occupations::uniform(config.L, config.N);
  if (tau_end == 0.0) {
    Trajectory traj;
    traj.snapshots.push_back(start);
    traj.converged = true;
    return traj;
  }
  return evolve(start, ctx, tau_end, config.snapshot_taus, config.evolve_options());
}

std::string snapshot_file_name(double tau) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, tau);
  return "snapshot_tau" + std::string(buf, res.ptr) + ".csv";
}

std::string steady_state_csv(const SingleRunResult& r) {
  std::ostringstream os;
  os << "mode_index,k,omega_over_J,n\r\n";
  for (std::size_t m = 0; m < r.spectrum.L; ++m)
    os << m << ',' << num(r.spectrum.k[m]) << ',' << num(r.spectrum.omega[m]) << ',' << num(r.steady.state.n[m]) << "\r\n";
  return os.str();
}

std::string perturbative_csv(const SingleRunResult& r) {
  std::ostringstream os;
  os << "mode_index,omega_over_J,n_be,n_deformed,beta_of_omega\r\n";
  for (std::size_t m = 0; m < r.spectrum.L; ++m) {
    const double beta = r.beta_of_omega.empty() ? 0.0 : r.beta_of_omega[m];
    os << m << ',' << num(r.spectrum.omega[m]) << ',' << num(r.perturbative.n_be[m]) << ','
       << num(r.perturbative.n[m]) << ',' << num(beta) << "\r\n";
  }
  return os.str();
}

std::string report_json(const SingleRunResult& r) {
  using nlohmann::json;
  json doc;
  doc["config"] = json::parse(serialize_config(r.config));
  doc["N"] = r.config.N;
  doc["N_drift"] = r.N_drift;
  doc["max_integration_drift"] = r.steady.max_drift;
  doc["converged"] = r.steady.converged;
  doc["steady_residual"] = r.steady.residual;
  doc["march_residual"] = r.steady.march_residual;
  doc["integrator_steps"] = r.steady.steps;
  doc["tau_final"] = r.steady.state.tau;
  const auto& p = r.perturbative;
  doc["perturbative"] = {{"beta0", p.beta0},
                         {"mu", json_number(p.mu)},
                         {"C", p.C},
                         {"c_with_exp_minus_beta0_mu", json_number(p.c_minus_form)},
                         {"c_with_exp_plus_beta0_mu", json_number(p.c_plus_form)},
                         {"infinite_temperature", p.infinite_temperature},
                         {"outside_perturbative_regime", p.outside_perturbative_regime}};
  const auto& rep = r.report;
  doc["kl_vs_perturbative"] = json_number(rep.kl_vs_perturbative);
  doc["kl_vs_be"] = json_number(rep.kl_vs_be);
  doc["ratio_R"] = json_number(rep.ratio_R);
  doc["ratio_R_infinite"] = r.ratio_infinite;
  doc["kl_reliable"] = r.kl_reliable;
  doc["excluded_modes"] = rep.excluded_modes;
  doc["delta_n"] = rep.delta_n;
  doc["delta_n_convention"] = "n_GS - n_high";
  doc["delta_n_high_minus_gs"] = -rep.delta_n;
  doc["fitted_beta"] = json_number(rep.fitted_beta);
  doc["fitted_mu"] = json_number(rep.fitted_mu);
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& r) {
  const auto axes = axes_of(r.spec);
  std::ostringstream os;
  os << "delta_over_J,kappa_over_J";
  for (const auto* a : axes)
    if (!is_fixed_column(a->name)) os << ',' << a->name;
  for (const auto& m : r.spec.metrics) os << ',' << m;
  os << ",error\r\n";
  for (const auto& row : r.rows) {
    // Axis values are echoed verbatim; other columns come from the cell config.
    auto axis_value = [&](const std::string& name) {
      for (std::size_t i = 0; i < axes.size(); ++i)
        if (axes[i]->name == name) return row.axis_values[i];
      return get_parameter(row.cell, name);
    };
    os << num(axis_value("delta_over_J")) << ',' << num(axis_value("kappa_over_J"));
    for (std::size_t i = 0; i < axes.size(); ++i)
      if (!is_fixed_column(axes[i]->name)) os << ',' << num(row.axis_values[i]);
    for (double v : row.metrics) os << ',' << num(v);
    os << ',' << csv_field(row.error) << "\r\n";
  }
  return os.str();
}

void write_single(const SingleRunResult& result, const std::filesystem::path& dir) {
  write_file(dir / "steady_state.csv", steady_state_csv(result));
  write_file(dir / "perturbative.csv", perturbative_csv(result));
  if (result.config.write_report) write_file(dir / "report.json", report_json(result));
}

void write_snapshots(const RunConfig& config, const ModeSpectrum& spectrum, const Trajectory& traj,
                     const std::filesystem::path& dir) {
  (void)config;
  std::ostringstream combined;
  combined << "tau,mode_index,omega_over_J,n\r\n";
  for (const auto& snap : traj.snapshots) {
    std::ostringstream one;
    one << "tau,mode_index,omega_over_J,n\r\n";
    for (std::size_t m = 0; m < spectrum.L; ++m) {
      const std::string line = num(snap.tau) + ',' + std::to_string(m) + ',' + num(spectrum.omega[m]) + ',' +
                               num(snap.n[m]) + "\r\n";
      one << line;
      combined << line;
    }
    write_file(dir / snapshot_file_name(snap.tau), one.str());
  }
  write_file(dir / "snapshots.csv", combined.str());
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir) {
  write_file(dir / "sweep.csv", sweep_csv(result));
}

void write_spectrum(const RunConfig& config, const std::filesystem::path& dir, std::size_t points) {
  validate(config);
  const auto res = config.reservoir();
  std::ostringstream os;
  os << "omega_over_J,S,beta_eff_exact,beta_eff_expansion\r\n";
  const double span = 4.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double w = points > 1 ? -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
    const double expansion = res.Delta != 0.0 ? effective_beta_expansion(w, res) : kNaN;
    os << num(w) << ',' << num(noise_spectrum(w, res)) << ',' << num(effective_beta_exact(w, res)) << ','
       << num(expansion) << "\r\n";
  }
  write_file(dir / "spectrum.csv", os.str());
}

std::vector<VerifyCheck> run_verification(const RunConfig& config) {
  validate(config);
  std::vector<VerifyCheck> checks;
  auto add = [&](std::string name, double value, double threshold) {
    checks.push_back({std::move(name), value <= threshold, value, threshold});
  };
  const auto spectrum = build_modes(config.lattice());
  const auto reservoir = config.reservoir();
  const GaussLegendre& rule = gauss_legendre(kDefaultBandNodes);

  add("dos_normalization", std::abs(band_integral([](double) { return 1.0; }, 1.0, rule) - 1.0), 1e-10);

  if (reservoir.Delta != 0.0) {
    const double b0 = base_inverse_temperature(reservoir);
    const double mu = solve_chemical_potential(spectrum, config.N, b0);
    double sum = 0.0;
    for (double w : spectrum.omega) sum += bose_einstein(w, b0, mu);
    add("mu_solver_normalization", std::abs(sum - config.N) / config.N, 1e-10);

    const auto sol = deformed_distribution(spectrum, config.N, reservoir);
    double total = 0.0;
    for (double v : sol.n) total += v;
    add("deformed_normalization", std::abs(total - config.N) / config.N, 1e-9);

    const auto ode = residual_supplemental_odes(sol, spectrum.J, reservoir);
    add("ode_residual_zeroth_order", ode.zeroth, 1e-6);
    add("ode_residual_first_order", ode.first, 1e-6);
    add("ode_residual_second_order", ode.second, 1e-6);
  }

  ReservoirParams special = reservoir;
  special.Delta = -std::sqrt(3.0) * special.kappa / 2.0;
  const auto at_special = deformed_distribution(spectrum, config.N, special);
  double collapse = 0.0;
  for (std::size_t k = 0; k < spectrum.L; ++k) collapse = std::max(collapse, std::abs(at_special.n[k] - at_special.n_be[k]));
  add("special_point_collapse", collapse, 1e-12);

  // Two-mode fixed point in closed form.
  {
    LatticeParams two = config.lattice();
    two.L = 2;
    const auto spec2 = build_modes(two);
    const auto ctx2 = build_rate_context(spec2, reservoir, config.gamma_mode);
    if (ctx2.coupled() && reservoir.Omega0 > 0.0) {
      SteadyStateOptions opts = config.steady_options();
      opts.residual_tol = std::min(opts.residual_tol, 1e-12);
      const auto steady = find_steady_state(Occupations::uniform(2, config.N), ctx2, opts);
      const double a = ctx2.s(0, 1), b = ctx2.s(1, 0), N = config.N;
      // b n2 (n1 + 1) = a n1 (n2 + 1), n1 + n2 = N
      const double qa = a - b, qb = b * (N - 1.0) - a * (N + 1.0), qc = b * N;
      double n1;
      if (std::abs(qa) < 1e-300) {
        n1 = -qc / qb;
      } else {
        const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
        const double q = -0.5 * (qb + std::copysign(disc, qb));
        const double r1 = q / qa, r2 = qc / q;
        n1 = (r1 >= 0.0 && r1 <= N) ? r1 : r2;
      }
      add("two_mode_fixed_point", std::abs(steady.state.n[0] - n1), 1e-8);
    }
  }

  {
    const auto ctx = build_rate_context(spectrum, reservoir, config.gamma_mode);
    std::vector<double> n(spectrum.L);
    for (std::size_t k = 0; k < n.size(); ++k) n[k] = 0.1 + std::fmod(0.37 * static_cast<double>(k), 1.3);
    const auto dn = rhs(n, ctx);
    double sum = 0.0, worst = 0.0;
    for (double v : dn) {
      sum += v;
      worst = std::max(worst, std::abs(v));
    }
    add("rhs_conservation", worst > 0.0 ? std::abs(sum) / (worst * static_cast<double>(n.size())) : 0.0, 1e-14);
  }

  {
    double worst = 0.0, scale = 0.0;
    const auto lattice = config.lattice();
    for (int i = 0; i <= 100; ++i) {
      const double w = -1.98 + 3.96 * i / 100.0;
      const double plus = early_time_rate(w, 0.5, lattice, reservoir, rule);
      const double minus = early_time_rate(-w, 0.5, lattice, reservoir, rule);
      worst = std::max(worst, std::abs(plus + minus));
      scale = std::max(scale, std::abs(plus));
    }
    add("early_time_antisymmetry", scale > 0.0 ? worst / scale : worst, 1e-8);
  }
  return checks;
}

}  // namespace boson_kinetics
