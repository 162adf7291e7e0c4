#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "boson_kinetics_cli_test";

int run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " \"" BOSON_KINETICS_CLI "\" " + args + " > \"" + (kWork / "stdout.txt").string() +
                          "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto path = kWork / name;
  std::ofstream(path) << text;
  return path;
}

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  ~Workspace() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("steady run writes its files") {
  Workspace ws;
  const auto cfg = write_config("small.json", R"({"lattice": {"L": 20}, "particles": {"N": 10}})");
  const auto out = kWork / "steady";
  CHECK(run("steady --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
  CHECK(fs::exists(out / "steady_state.csv"));
  CHECK(fs::exists(out / "perturbative.csv"));
  CHECK(fs::exists(out / "report.json"));
}

TEST_CASE("output directory from the environment") {
  Workspace ws;
  const auto cfg = write_config("small.json", R"({"lattice": {"L": 20}, "particles": {"N": 10}})");
  const auto out = kWork / "from_env";
  CHECK(run("spectrum --config \"" + cfg.string() + "\"", "BOSON_KINETICS_OUT=\"" + out.string() + "\"") == 0);
  CHECK(fs::exists(out / "spectrum.csv"));
}

TEST_CASE("snapshots and sweep") {
  Workspace ws;
  const auto cfg = write_config("run.json", R"({
    "lattice": {"L": 16}, "particles": {"N": 8},
    "evolution": {"snapshot_taus": [0, 10]},
    "sweep": {"axis1": {"name": "delta_over_J", "values": [-1, -2]},
              "axis2": {"name": "kappa_over_J", "values": [1, 2]}}
  })");
  const auto out = kWork / "out";
  CHECK(run("snapshots --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
  CHECK(fs::exists(out / "snapshot_tau10.csv"));
  CHECK(run("sweep --threads 2 --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
  CHECK(fs::exists(out / "sweep.csv"));
}

TEST_CASE("exit codes") {
  Workspace ws;
  const auto bad = write_config("bad.json", R"({"lattice": {"L": 0}})");
  CHECK(run("steady --config \"" + bad.string() + "\" --out \"" + (kWork / "x").string() + "\"") == 2);
  const auto unknown = write_config("unknown.json", R"({"lattice": {"L": 4, "extra": 1}})");
  CHECK(run("steady --config \"" + unknown.string() + "\"") == 2);
  const auto frozen = write_config("frozen.json", R"({"lattice": {"L": 8}, "reservoir": {"chi_over_J": 0}})");
  CHECK(run("steady --config \"" + frozen.string() + "\" --out \"" + (kWork / "x").string() + "\"") == 3);
  CHECK(run("steady --config \"" + (kWork / "missing.json").string() + "\"") == 4);
  const auto ok = write_config("ok.json", R"({"lattice": {"L": 8}, "particles": {"N": 4}})");
  std::ofstream(kWork / "blocker") << "file";
  CHECK(run("steady --config \"" + ok.string() + "\" --out \"" + (kWork / "blocker" / "sub").string() + "\"") == 4);
  CHECK(run("verify") == 0);
}
