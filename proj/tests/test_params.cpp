#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "cavity/params.hpp"

using namespace cavity;

TEST_SUITE("params") {

TEST_CASE("epsilon = 1 selects the tight-trap limit") {
  const SystemParams p = from_config({{"n_atoms", "1"}, {"epsilon", "1.0"}, {"recoil_ratio", "0.01"}});
  CHECK(p.eta == 0.0);
  CHECK(p.epsilon == 1.0);
  CHECK(p.is_tight_limit());
  CHECK_THROWS(p.trap_frequency());
}

TEST_CASE("eta determines epsilon") {
  const SystemParams p = from_config({{"n_atoms", "8"}, {"eta", "0.587"}, {"recoil_ratio", "0.01"}});
  CHECK(p.epsilon == doctest::Approx(0.502).epsilon(1e-3));
  CHECK(p.epsilon == std::exp(-2.0 * 0.587 * 0.587));
  CHECK(p.n_max_fock == 40);
  CHECK(p.grid_points == 256);
  CHECK(p.grid_halfwidth == 8.0);
  CHECK(p.kappa_ext == 0.0);
}

TEST_CASE("epsilon input is converted to eta and back") {
  const SystemParams p = from_config({{"n_atoms", "3"}, {"epsilon", "0.5"}, {"recoil_ratio", "0.02"}});
  CHECK(p.eta == doctest::Approx(std::sqrt(std::log(2.0) / 2.0)));
  CHECK(p.epsilon == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("trap frequency and zero-point energy") {
  const SystemParams p = from_config({{"n_atoms", "3"}, {"eta", "0.5"}, {"recoil_ratio", "0.01"}});
  CHECK(p.trap_frequency() == doctest::Approx(0.04));
  CHECK(p.zero_point_energy() == doctest::Approx(3 * 0.04 / 2));
}

TEST_CASE("invalid configurations name the offending key") {
  auto key_of = [](const RawConfig& raw) {
    try {
      from_config(raw);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of({{"n_atoms", "0"}, {"eta", "0.5"}, {"recoil_ratio", "0.01"}}) == "n_atoms");
  CHECK(key_of({{"n_atoms", "2"}, {"epsilon", "0"}, {"recoil_ratio", "0.01"}}) == "epsilon");
  CHECK(key_of({{"n_atoms", "2"}, {"epsilon", "1.5"}, {"recoil_ratio", "0.01"}}) == "epsilon");
  CHECK(key_of({{"n_atoms", "2"}, {"eta", "0.5"}, {"recoil_ratio", "-1"}}) == "recoil_ratio");
  CHECK(key_of({{"n_atoms", "2"}, {"eta", "0.5"}, {"recoil_ratio", "0.01"}, {"kappa_ext", "-0.1"}}) == "kappa_ext");
  CHECK(key_of({{"n_atoms", "2"}, {"eta", "abc"}, {"recoil_ratio", "0.01"}}) == "eta");
  CHECK(key_of({{"n_atoms", "2"}, {"eta", "0.5"}}) == "recoil_ratio");
  CHECK(key_of({{"n_atoms", "2"}, {"eta", "0.5"}, {"recoil_ratio", "0.01"}, {"etta", "1"}}) == "etta");
  CHECK(key_of({{"n_atoms", "2"}, {"eta", "0.5"}, {"epsilon", "0.6"}, {"recoil_ratio", "0.01"}}) != "<none>");
  CHECK(key_of({{"n_atoms", "2"}, {"recoil_ratio", "0.01"}}) != "<none>");
}

TEST_CASE("n_atoms error message") {
  try {
    from_config({{"n_atoms", "0"}, {"eta", "0.5"}, {"recoil_ratio", "0.01"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("n_atoms must be >= 1") != std::string::npos);
  }
}

TEST_CASE("round trip through the key/value form is exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    SystemParams p;
    p.n_atoms = 1 + static_cast<int>(unit(rng) * 50);
    p.eta = k % 10 == 0 ? 0.0 : 2.0 * unit(rng);
    p.epsilon = epsilon_from_eta(p.eta);
    p.recoil_ratio = unit(rng) * 0.1;
    p.kappa_ext = unit(rng);
    p.n_max_fock = 2 + static_cast<int>(unit(rng) * 100);
    p.grid_points = 8 + static_cast<int>(unit(rng) * 500);
    p.grid_halfwidth = 1.0 + 10.0 * unit(rng);
    CHECK(from_config(to_config(p)) == p);
  }
}

TEST_CASE("text config with comments, sections and quotes") {
  const RawConfig raw = parse_config_text(
      "# run\n[system]\nn_atoms = 2   # two atoms\neta = \"0.5\"\n\nrecoil_ratio=0.01\n");
  CHECK(raw.at("n_atoms") == "2");
  CHECK(raw.at("eta") == "0.5");
  CHECK(from_config(raw).recoil_ratio == 0.01);
  CHECK_THROWS_AS(parse_config_text("eta = 1\neta = 2\n"), ConfigError);
}

TEST_CASE("JSON config and manifest params object") {
  const std::string path = "params_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"command": "spectrum", "params": {"n_atoms": "2", "eta": 0.25, "recoil_ratio": "0.01"}})";
  }
  const SystemParams p = from_config(read_config_file(path));
  CHECK(p.n_atoms == 2);
  CHECK(p.eta == 0.25);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_config_file("does/not/exist.toml"), ConfigError);
}

}  // TEST_SUITE
