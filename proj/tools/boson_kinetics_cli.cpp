// boson-kinetics: command-line driver.
//
//   boson-kinetics steady    --config run.json --out dir
//   boson-kinetics snapshots --config run.json --out dir
//   boson-kinetics sweep     --config run.json --out dir --threads 4
//   boson-kinetics spectrum  --config run.json --out dir
//   boson-kinetics verify    --config run.json
//
// Exit codes: 0 success, 1 a verify check failed, 2 config error, 3 convergence error,
// 4 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "boson_kinetics/errors.hpp"
#include "boson_kinetics/runner.hpp"

namespace bk = boson_kinetics;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kConvergenceError = 3, kIoError = 4 };

bk::RunConfig load_config(const std::string& path) {
  if (path.empty()) return bk::parse_config("{}");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bk::IoError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return bk::parse_config(text.str());
}

std::filesystem::path output_dir(const std::string& flag, const bk::RunConfig& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("BOSON_KINETICS_OUT"); env && *env) return env;
  return config.output_directory;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetics of bosons scattered by an engineered driven-dissipative reservoir"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  int threads = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
    sub->add_option("--out", out_flag, "Output directory (overrides BOSON_KINETICS_OUT and the config)");
    sub->add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  };
  auto* steady = app.add_subcommand("steady", "Time-march to the steady state and compare with the analytic forms");
  auto* snapshots = app.add_subcommand("snapshots", "Record the distribution at the configured snapshot times");
  auto* sweep = app.add_subcommand("sweep", "Evaluate metrics over a one- or two-axis parameter grid");
  auto* spectrum = app.add_subcommand("spectrum", "Dump the noise spectrum and Stokes temperatures");
  auto* verify = app.add_subcommand("verify", "Run the residual and oracle checks");
  for (auto* sub : {steady, snapshots, sweep, spectrum, verify}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    bk::RunConfig config = load_config(config_path);
    if (threads > 0) config.threads = threads;
    const auto dir = output_dir(out_flag, config);

    if (steady->parsed()) {
      const auto result = bk::compute_single(config);
      bk::write_single(result, dir);
      std::cout << "steady state: residual " << result.steady.residual << ", N drift " << result.N_drift
                << ", KL(pert) " << result.report.kl_vs_perturbative << ", KL(BE) " << result.report.kl_vs_be
                << ", R " << result.report.ratio_R << "\n"
                << "delta_n (n_GS - n_high) " << result.report.delta_n << ", (n_high - n_GS) "
                << -result.report.delta_n << "\n";
    } else if (snapshots->parsed()) {
      const auto traj = bk::compute_snapshots(config);
      bk::write_snapshots(config, bk::build_modes(config.lattice()), traj, dir);
      std::cout << "wrote " << traj.snapshots.size() << " snapshots to " << dir.string() << "\n";
    } else if (sweep->parsed()) {
      if (!config.sweep) throw bk::ConfigError("sweep: the config has no \"sweep\" section");
      const auto result = bk::compute_sweep(config, *config.sweep, config.threads);
      bk::write_sweep(result, dir);
      std::size_t failed = 0;
      for (const auto& row : result.rows) failed += row.error.empty() ? 0 : 1;
      std::cout << "sweep: " << result.rows.size() << " cells, " << failed << " with errors\n";
    } else if (spectrum->parsed()) {
      bk::write_spectrum(config, dir);
      std::cout << "wrote " << (dir / "spectrum.csv").string() << "\n";
    } else if (verify->parsed()) {
      bool ok = true;
      for (const auto& check : bk::run_verification(config)) {
        std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << "  value=" << check.value
                  << "  threshold=" << check.threshold << "\n";
        ok = ok && check.passed;
      }
      return ok ? kOk : kVerifyFailed;
    }
  } catch (const bk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bk::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bk::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    for (const auto& s : e.history()) std::cerr << "  tau=" << s.tau << " residual=" << s.residual << "\n";
    return kConvergenceError;
  } catch (const bk::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConvergenceError;
  }
  return kOk;
}
