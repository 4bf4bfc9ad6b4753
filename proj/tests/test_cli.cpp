#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "cavity_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(CAVITY_CLI_PATH) + " " + args + " > " + (kWork / "stdout.txt").string() +
                          " 2> " + (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path p = kWork / name;
  std::ofstream(p) << body;
  return p.string();
}

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE_FIXTURE(Workspace, "usage errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("spectrum") == 2);
  CHECK(run("spectrum --config " + (kWork / "missing.toml").string()) == 2);
  CHECK(run("nonsense") == 2);
  const std::string bad = write_config("bad.toml", "n_atoms = 0\neta = 0.5\nrecoil_ratio = 0.01\n");
  CHECK(run("spectrum --config " + bad) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("n_atoms") != std::string::npos);
  CHECK(run("--help") == 0);
}

TEST_CASE_FIXTURE(Workspace, "tight single atom gives a two-line stick file") {
  const std::string cfg = write_config("n1.toml", "n_atoms = 1\nepsilon = 1.0\nrecoil_ratio = 0.01\n");
  const fs::path out = kWork / "n1";
  REQUIRE(run("spectrum --config " + cfg + " --out " + out.string()) == 0);
  CHECK(slurp(out / "sticks.csv") == "omega,weight\n-1,0.5\n1,0.5\n");
  CHECK(fs::exists(out / "sidebands.json"));
  CHECK_FALSE(fs::exists(out / "broadened.csv"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["command"] == "spectrum");
  CHECK(manifest["outputs"].size() == 3);
  for (const auto& f : manifest["outputs"]) CHECK(fs::exists(f.get<std::string>()));
}

TEST_CASE_FIXTURE(Workspace, "broadened spectrum when kappa is given") {
  const std::string cfg =
      write_config("n2.toml", "n_atoms = 2\nepsilon = 0.8\nrecoil_ratio = 0.01\nn_max_fock = 12\n");
  const fs::path out = kWork / "n2";
  REQUIRE(run("spectrum --config " + cfg + " --kappa 0.05 --out " + out.string()) == 0);
  const std::string b = slurp(out / "broadened.csv");
  CHECK(b.rfind("omega,intensity\n", 0) == 0);
  CHECK(std::count(b.begin(), b.end(), '\n') == 2002);
  REQUIRE(run("spectrum --config " + cfg + " --format json --out " + (kWork / "n2j").string()) == 0);
  CHECK(nlohmann::json::parse(slurp(kWork / "n2j" / "sticks.json"))["schema_version"] == 1);
}

TEST_CASE_FIXTURE(Workspace, "budget errors point to the moments route") {
  const std::string cfg = write_config("big.toml", "n_atoms = 3\neta = 0.5\nrecoil_ratio = 0.01\n");
  CHECK(run("spectrum --config " + cfg + " --out " + (kWork / "big").string()) == 1);
  CHECK(slurp(kWork / "stderr.txt").find("moments") != std::string::npos);
}

TEST_CASE_FIXTURE(Workspace, "moments are deterministic and replay from the manifest") {
  const std::string cfg = write_config("m.toml", "n_atoms = 20\nepsilon = 0.5\nrecoil_ratio = 0.01\n");
  const fs::path a = kWork / "a", b = kWork / "b", c = kWork / "c";
  REQUIRE(run("moments --config " + cfg + " --samples 20000 --seed 5 --threads 1 --out " + a.string()) == 0);
  REQUIRE(run("moments --config " + cfg + " --samples 20000 --seed 5 --threads 2 --out " + b.string()) == 0);
  CHECK(slurp(a / "moments.csv") == slurp(b / "moments.csv"));
  CHECK(slurp(a / "predictions.csv") == slurp(b / "predictions.csv"));
  REQUIRE(run("moments --config " + (a / "manifest.json").string() + " --out " + c.string()) == 0);
  CHECK(slurp(a / "moments.csv") == slurp(c / "moments.csv"));
  CHECK(slurp(a / "predictions.csv") == slurp(c / "predictions.csv"));
  const std::string preds = slurp(a / "predictions.csv");
  for (const char* m : {"perturbative_mc", "series_1_over_N", "tight_limit", "loose_limit"}) {
    CHECK(preds.find(m) != std::string::npos);
  }
  CHECK(run("moments --config " + cfg + " --samples 10") == 2);
  CHECK(run("count --config " + (a / "manifest.json").string()) == 2);
}

TEST_CASE_FIXTURE(Workspace, "count, fig3 and fig4") {
  const std::string cfg = write_config("c.toml", "n_atoms = 8\nepsilon = 0.99\nrecoil_ratio = 0.01\n");
  REQUIRE(run("count --config " + cfg + " --n 8 --out " + (kWork / "count").string()) == 0);
  const auto report = nlohmann::json::parse(slurp(kWork / "count" / "count.json"));
  CHECK(report["distinguishable"] == true);
  CHECK(report["n_max_unbounded"] == false);
  CHECK(run("count --config " + cfg + " --n 0") == 2);

  REQUIRE(run("fig3 --out " + (kWork / "f3").string()) == 0);
  const std::string f3 = slurp(kWork / "f3" / "fig3.csv");
  CHECK(f3.rfind("epsilon,mean_red_n8,halfwidth_n8,mean_red_n9,halfwidth_n9,overlap\n", 0) == 0);
  CHECK(std::count(f3.begin(), f3.end(), '\n') == 101);

  REQUIRE(run("fig4 --kappas 0,0.1 --eps-points 11 --out " + (kWork / "f4").string()) == 0);
  const std::string f4 = slurp(kWork / "f4" / "fig4.csv");
  CHECK(f4.rfind("epsilon,nmax_kappa_0,nmax_kappa_0.1\n", 0) == 0);
  CHECK(run("fig4 --eps-min 0.5 --eps-max 0.2") == 2);
}

}  // TEST_SUITE
