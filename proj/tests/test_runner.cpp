#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/runner.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace boson_kinetics;
namespace fs = std::filesystem;

namespace {

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("boson_kinetics_test_" + name);
  fs::remove_all(dir);
  return dir;
}

SweepSpec grid(std::size_t n1, std::size_t n2) {
  SweepSpec s;
  s.axis1.name = "delta_over_J";
  s.axis2 = SweepAxis{"kappa_over_J", {}};
  for (std::size_t i = 0; i < n1; ++i) s.axis1.values.push_back(-1.0 - 0.5 * static_cast<double>(i));
  for (std::size_t j = 0; j < n2; ++j) s.axis2->values.push_back(0.5 + 0.5 * static_cast<double>(j));
  return s;
}

}  // namespace

TEST_CASE("single run on the default configuration") {
  const auto r = compute_single(RunConfig{});
  CHECK(r.steady.converged);
  CHECK(std::abs(r.N_drift) <= 5e-8);
  CHECK(r.steady.residual < 1e-10);
  CHECK(r.report.delta_n > 0.0);
  CHECK(r.report.fitted_beta > 0.0);
  CHECK(r.beta_of_omega.size() == 100);
  CHECK(r.perturbative.n.size() == 100);
}

TEST_CASE("single run is deterministic") {
  RunConfig c;
  c.L = 40;
  c.N = 20;
  const auto a = compute_single(c);
  const auto b = compute_single(c);
  CHECK(a.steady.state.n == b.steady.state.n);
  CHECK(report_json(a) == report_json(b));
}

TEST_CASE("resonant drive reports the uniform state") {
  RunConfig c;
  c.L = 20;
  c.N = 10;
  c.delta_over_J = 0.0;
  const auto r = compute_single(c);
  CHECK(r.perturbative.infinite_temperature);
  CHECK(r.beta_of_omega.empty());
  CHECK(r.report.kl_vs_be == 0.0);
  const auto doc = nlohmann::json::parse(report_json(r));
  CHECK(doc["perturbative"]["mu"].is_null());
}

TEST_CASE("uncoupled bath is a convergence failure") {
  RunConfig c;
  c.chi_over_J = 0.0;
  CHECK_THROWS_AS(compute_single(c), ConvergenceError);
}

TEST_CASE("sweep layout and threading") {
  RunConfig c;
  c.L = 30;
  c.N = 15;
  const auto spec = grid(10, 10);
  const auto serial = compute_sweep(c, spec, 1);
  REQUIRE(serial.rows.size() == 100);
  CHECK(serial.rows[0].axis_values == std::vector<double>{-1.0, 0.5});
  CHECK(serial.rows[1].axis_values == std::vector<double>{-1.0, 1.0});
  CHECK(serial.rows[10].axis_values == std::vector<double>{-1.5, 0.5});
  const auto threaded = compute_sweep(c, spec, 4);
  CHECK(sweep_csv(serial) == sweep_csv(threaded));
  const auto csv = sweep_csv(serial);
  CHECK(csv.rfind("delta_over_J,kappa_over_J,kl,kl_be,R,delta_n,fitted_beta,error\r\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
}

TEST_CASE("one-cell sweep equals the single run") {
  RunConfig c;
  c.L = 30;
  c.N = 15;
  const auto sweep = compute_sweep(c, grid(1, 1), 1);
  c.delta_over_J = -1.0;
  c.kappa_over_J = 0.5;
  const auto single = compute_single(c);
  REQUIRE(sweep.rows.size() == 1);
  CHECK(sweep.rows[0].metrics[0] == single.report.kl_vs_perturbative);
  CHECK(sweep.rows[0].metrics[1] == single.report.kl_vs_be);
  CHECK(sweep.rows[0].metrics[3] == single.report.delta_n);
  CHECK(sweep.rows[0].metrics[4] == single.report.fitted_beta);
}

TEST_CASE("failed cells carry an error and do not stop the sweep") {
  RunConfig c;
  c.L = 10;
  c.N = 5;
  SweepSpec spec;
  spec.axis1 = {"chi_over_J", {0.0, 1e-3}};
  const auto r = compute_sweep(c, spec, 1);
  REQUIRE(r.rows.size() == 2);
  CHECK_FALSE(r.rows[0].error.empty());
  CHECK(std::isnan(r.rows[0].metrics[0]));
  CHECK(std::isfinite(r.rows[1].metrics[0]));
  CHECK(sweep_csv(r).find("nan") != std::string::npos);
}

TEST_CASE("snapshot runs") {
  CHECK(snapshot_file_name(10.0) == "snapshot_tau10.csv");
  CHECK(snapshot_file_name(0.5) == "snapshot_tau0.5.csv");
  RunConfig c;
  c.L = 20;
  c.N = 10;
  CHECK_THROWS_AS(compute_snapshots(c), ConfigError);
  c.snapshot_taus = {0.0, 1.0, 10.0};
  const auto traj = compute_snapshots(c);
  REQUIRE(traj.snapshots.size() == 3);
  for (const auto& s : traj.snapshots) CHECK(std::abs(s.total() - 10.0) <= 5e-8);

  const auto dir = scratch("snapshots");
  write_snapshots(c, build_modes(c.lattice()), traj, dir);
  CHECK(fs::exists(dir / "snapshot_tau0.csv"));
  CHECK(fs::exists(dir / "snapshot_tau1.csv"));
  CHECK(fs::exists(dir / "snapshot_tau10.csv"));
  const auto all = read(dir / "snapshots.csv");
  CHECK(all.rfind("tau,mode_index,omega_over_J,n\r\n", 0) == 0);
  CHECK(std::count(all.begin(), all.end(), '\n') == 61);
  fs::remove_all(dir);
}

TEST_CASE("single-run files") {
  RunConfig c;
  c.L = 20;
  c.N = 10;
  const auto r = compute_single(c);
  const auto dir = scratch("single");
  write_single(r, dir);
  const auto steady = read(dir / "steady_state.csv");
  CHECK(steady.rfind("mode_index,k,omega_over_J,n\r\n", 0) == 0);
  CHECK(std::count(steady.begin(), steady.end(), '\n') == 21);
  CHECK(read(dir / "perturbative.csv").rfind("mode_index,omega_over_J,n_be,n_deformed,beta_of_omega\r\n", 0) == 0);
  const auto doc = nlohmann::json::parse(read(dir / "report.json"));
  CHECK(doc["N_drift"].get<double>() == r.N_drift);
  CHECK(doc.contains("ratio_R"));
  CHECK(doc.contains("fitted_beta"));
  write_spectrum(c, dir);
  const auto spectrum = read(dir / "spectrum.csv");
  CHECK(std::count(spectrum.begin(), spectrum.end(), '\n') == 802);
  fs::remove_all(dir);
}

TEST_CASE("verification suite passes on the default configuration") {
  for (const auto& check : run_verification(RunConfig{})) {
    INFO(check.name, " value ", check.value, " threshold ", check.threshold);
    CHECK(check.passed);
  }
}
