#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavity/counting.hpp"
#include "cavity/geometry.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/io.hpp"
#include "cavity/moments.hpp"
#include "cavity/params.hpp"
#include "cavity/spectra.hpp"
#include "cavity/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cavity;

namespace {

constexpr const char* kVersion = "1.0.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = ".";
  std::string format = "csv";
};

struct ParamFlags {
  std::optional<int> n_atoms;
  std::optional<double> eta;
  std::optional<double> epsilon;
  std::optional<double> recoil;
  std::optional<double> kappa;
  std::optional<int> n_max_fock;
  std::optional<int> grid_points;
  std::optional<double> grid_halfwidth;
};

const std::set<std::string> kParamOptions = {"--n-atoms", "--eta",         "--epsilon",     "--recoil",
                                             "--kappa",   "--n-max-fock", "--grid-points", "--grid-halfwidth"};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* cfg = sub->add_option("--config", c.config, "Parameter file (key = value, JSON, or a run manifest)");
  if (config_required) cfg->required();
  sub->add_option("--seed", c.seed, "Seed for all randomness");
  sub->add_option("--threads", c.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--format", c.format, "Data file format")->check(CLI::IsMember({"csv", "json"}));
}

void add_param_flags(CLI::App* sub, ParamFlags& f) {
  sub->add_option("--n-atoms", f.n_atoms, "Override n_atoms");
  sub->add_option("--eta", f.eta, "Override the Lamb-Dicke parameter");
  sub->add_option("--epsilon", f.epsilon, "Override trap tightness (replaces eta)");
  sub->add_option("--recoil", f.recoil, "Override recoil_ratio");
  sub->add_option("--kappa", f.kappa, "Override kappa_ext (cavity decay, units of g)");
  sub->add_option("--n-max-fock", f.n_max_fock, "Override motional levels per atom");
  sub->add_option("--grid-points", f.grid_points, "Override grid points per atom");
  sub->add_option("--grid-halfwidth", f.grid_halfwidth, "Override grid half-width in u");
}

json load_json_if_manifest(const std::string& path) {
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return nullptr;
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.contains("command")) return nullptr;
  return doc;
}

/// Fills options not given on the command line from a manifest's recorded options.
void replay_options(CLI::App* sub, const Common& c) {
  if (c.config.empty()) return;
  const json manifest = load_json_if_manifest(c.config);
  if (manifest.is_null()) return;
  if (manifest.value("command", "") != sub->get_name()) {
    throw UsageError("manifest was written by '" + manifest.value("command", "") + "', not '" + sub->get_name() + "'");
  }
  if (!manifest.contains("options")) return;
  for (CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (opt->count() > 0 || name == "--config" || name == "--help" || kParamOptions.count(name)) continue;
    const auto it = manifest["options"].find(name);
    if (it == manifest["options"].end() || !it->is_string()) continue;
    opt->add_result(it->get<std::string>());
    opt->run_callback();
  }
}

SystemParams resolve_params(const Common& c, const ParamFlags& f, RawConfig defaults = {}) {
  RawConfig raw = std::move(defaults);
  if (!c.config.empty()) {
    if (!fs::exists(c.config)) throw UsageError("config file not found: " + c.config);
    raw = read_config_file(c.config);
  }
  if (f.n_atoms) raw["n_atoms"] = std::to_string(*f.n_atoms);
  if (f.eta) {
    raw.erase("epsilon");
    raw["eta"] = format_number(*f.eta);
  }
  if (f.epsilon) {
    raw.erase("eta");
    raw["epsilon"] = format_number(*f.epsilon);
  }
  if (f.recoil) raw["recoil_ratio"] = format_number(*f.recoil);
  if (f.kappa) raw["kappa_ext"] = format_number(*f.kappa);
  if (f.n_max_fock) raw["n_max_fock"] = std::to_string(*f.n_max_fock);
  if (f.grid_points) raw["grid_points"] = std::to_string(*f.grid_points);
  if (f.grid_halfwidth) raw["grid_halfwidth"] = format_number(*f.grid_halfwidth);
  return from_config(raw);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
    files_.push_back(path.string());
    std::cout << "wrote " << path.string() << '\n';
  }

  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  void write_manifest(const CLI::App* sub, const Common& c, const std::vector<std::string>& argv,
                      const std::optional<SystemParams>& params) {
    json options = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string name = opt->get_name();
      if (name == "--help" || name == "--config" || name == "--out" || kParamOptions.count(name)) continue;
      if (opt->count() > 0) {
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
        options[name] = joined;
      } else if (!opt->get_default_str().empty()) {
        options[name] = opt->get_default_str();
      }
    }
    json m = {{"schema_version", kSchemaVersion},
              {"tool", "cavity"},
              {"version", kVersion},
              {"command", sub->get_name()},
              {"argv", argv},
              {"params", params ? params_json(*params) : json(nullptr)},
              {"options", options},
              {"seed", c.seed},
              {"timestamp", utc_timestamp()}};
    std::vector<std::string> listed = files_;
    listed.push_back((dir_ / "manifest.json").string());
    m["outputs"] = listed;
    write_json("manifest.json", m);
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

MonteCarloOptions mc_from(const Common& c, long long samples) {
  MonteCarloOptions mc;
  mc.seed = c.seed;
  mc.threads = c.threads;
  mc.n_samples = samples;
  return mc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission spectra and atom counting for atoms trapped in an optical cavity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();
  const std::vector<std::string> args(argv, argv + argc);

  Common c;
  ParamFlags pf;

  auto* spectrum = app.add_subcommand("spectrum", "Stick spectrum, optional Lorentzian broadening, sideband summary");
  add_common(spectrum, c, true);
  add_param_flags(spectrum, pf);
  std::string backend = "fock";
  int broaden_points = 2001;
  std::size_t dense_limit = SpectrumOptions{}.dense_limit;
  std::size_t max_nonzeros = AssembleOptions{}.max_nonzeros;
  spectrum->add_option("--backend", backend, "Motional basis")->check(CLI::IsMember({"fock", "grid"}));
  spectrum->add_option("--points", broaden_points, "Frequency points of the broadened spectrum")
      ->check(CLI::Range(2, 10'000'000));
  spectrum->add_option("--dense-limit", dense_limit, "Largest dimension diagonalized densely");
  spectrum->add_option("--max-nonzeros", max_nonzeros, "Operator nonzero budget");

  auto* moments = app.add_subcommand("moments", "Monte Carlo moments and every sideband prediction");
  add_common(moments, c, true);
  add_param_flags(moments, pf);
  long long samples = 1'000'000;
  double cutoff = -1.0;
  moments->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::Range(1000LL, 1'000'000'000'000LL));
  moments->add_option("--cutoff", cutoff, "chi^2 clip threshold (negative: 1e-6 N)");

  auto* count = app.add_subcommand("count", "Distinguishability of N versus N+1 atoms");
  add_common(count, c, true);
  add_param_flags(count, pf);
  std::optional<int> count_n;
  std::string method = "series";
  double multiplier = 1.0;
  count->add_option("--n", count_n, "Atom number N (default: n_atoms)")->check(CLI::PositiveNumber);
  count->add_option("--method", method, "Sideband statistics route")
      ->check(CLI::IsMember({"series", "perturbative", "spectrum"}));
  count->add_option("--multiplier", multiplier, "Width multiplier applied to RMS widths")
      ->check(CLI::PositiveNumber);
  count->add_option("--samples", samples, "Monte Carlo samples (perturbative)")
      ->check(CLI::Range(1000LL, 1'000'000'000'000LL));
  count->add_option("--backend", backend, "Motional basis (spectrum)")->check(CLI::IsMember({"fock", "grid"}));

  auto* fig3 = app.add_subcommand("fig3", "N versus N+1 red-sideband bands over trap tightness");
  add_common(fig3, c, false);
  add_param_flags(fig3, pf);
  std::vector<int> n_pair = {8, 9};
  double eps_min = 0.01, eps_max = 1.0;
  int eps_points = 100;
  fig3->add_option("--n-pair", n_pair, "Two atom numbers")->expected(2)->delimiter(',');
  fig3->add_option("--eps-min", eps_min, "Smallest epsilon");
  fig3->add_option("--eps-max", eps_max, "Largest epsilon");
  fig3->add_option("--eps-points", eps_points, "Epsilon grid points")->check(CLI::Range(2, 1'000'000));

  auto* fig4 = app.add_subcommand("fig4", "Atom-counting limit over trap tightness and cavity decay");
  add_common(fig4, c, false);
  std::vector<double> kappas = {0.0, 0.02, 0.05, 0.1, 0.2};
  double eps4_min = 0.01, eps4_max = 0.99;
  int eps4_points = 99;
  fig4->add_option("--kappas", kappas, "kappa/g values")->delimiter(',');
  fig4->add_option("--eps-min", eps4_min, "Smallest epsilon");
  fig4->add_option("--eps-max", eps4_max, "Largest epsilon");
  fig4->add_option("--eps-points", eps4_points, "Epsilon grid points")->check(CLI::Range(2, 1'000'000));

  auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite and print a pass/fail table");
  add_common(validate_cmd, c, false);
  long long validate_samples = 1'000'000;
  validate_cmd->add_option("--samples", validate_samples, "Monte Carlo samples per check")
      ->check(CLI::Range(1000LL, 1'000'000'000'000LL));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    replay_options(sub, c);

    if (sub == spectrum) {
      const SystemParams p = resolve_params(c, pf);
      StickSpectrum sticks;
      if (p.is_tight_limit()) {
        sticks = tavis_cummings_sticks(p.n_atoms);
      } else {
        const MotionalBasis basis = make_basis(p, backend_from_string(backend));
        ManifoldOperator op;
        try {
          op = assemble(p, basis, AssembleOptions{max_nonzeros});
        } catch (const BudgetExceeded& e) {
          throw BudgetExceeded(std::string(e.what()) +
                               "; use `cavity moments` for the perturbative route at this atom number");
        }
        SpectrumOptions so;
        so.dense_limit = dense_limit;
        sticks = stick_spectrum(op, initial_state(p, basis), so);
      }
      const auto [red, blue] = split_sidebands(sticks);
      Outputs out(c.out);
      if (c.format == "csv") {
        out.write("sticks.csv", [&](std::ostream& o) { write_sticks_csv(o, sticks); });
      } else {
        out.write_json("sticks.json", sticks_json(sticks));
      }
      if (p.kappa_ext > 0.0) {
        const BroadenedSpectrum b = convolve(sticks, p.kappa_ext, covering_grid(sticks, p.kappa_ext, broaden_points));
        if (c.format == "csv") {
          out.write("broadened.csv", [&](std::ostream& o) { write_broadened_csv(o, b); });
        } else {
          out.write_json("broadened.json", broadened_json(b));
        }
      }
      out.write_json("sidebands.json", sidebands_json(red, blue));
      out.write_manifest(sub, c, args, p);
      std::cout << "red mean " << format_number(red.mean) << " variance " << format_number(red.variance)
                << "; blue mean " << format_number(blue.mean) << " variance " << format_number(blue.variance)
                << '\n';
    } else if (sub == moments) {
      const SystemParams p = resolve_params(c, pf);
      MonteCarloOptions mc = mc_from(c, samples);
      mc.cutoff = cutoff;
      const MomentEstimates est = mc_moments(p, mc);
      std::vector<SidebandPrediction> preds;
      for (Side side : {Side::red, Side::blue}) {
        preds.push_back(perturbative_sideband(est, p, side));
        preds.push_back(series_sideband(p, side));
        preds.push_back(tight_limit(p, side));
        preds.push_back(loose_limit(p, side));
      }
      Outputs out(c.out);
      if (c.format == "csv") {
        out.write("moments.csv", [&](std::ostream& o) { write_moments_csv(o, est); });
        out.write("predictions.csv", [&](std::ostream& o) { write_predictions_csv(o, preds); });
      } else {
        out.write_json("moments.json", moments_json(est));
        out.write_json("predictions.json", predictions_json(preds));
      }
      out.write_manifest(sub, c, args, p);
    } else if (sub == count) {
      const SystemParams p = resolve_params(c, pf);
      const int n = count_n.value_or(p.n_atoms);
      CountingReport report;
      if (method == "series") {
        report = count_series(n, p, multiplier);
      } else if (method == "perturbative") {
        report = count_perturbative(n, p, mc_from(c, samples), multiplier);
      } else {
        report = count_spectrum(n, p, backend_from_string(backend), {}, multiplier);
      }
      Outputs out(c.out);
      out.write_json("count.json", count_json(report, separation(n, p), n_max(p.epsilon, p.kappa_ext)));
      if (c.format == "csv") out.write("count.csv", [&](std::ostream& o) { write_count_csv(o, report); });
      out.write_manifest(sub, c, args, p);
      std::cout << "N=" << n << (report.distinguishable ? " distinguishable" : " not distinguishable")
                << " from N+1: separation " << format_number(report.separation) << ", width "
                << format_number(report.combined_width) << '\n';
    } else if (sub == fig3) {
      const SystemParams p = resolve_params(c, pf, {{"n_atoms", "8"}, {"epsilon", "0.5"}, {"recoil_ratio", "0.01"}});
      if (!(eps_min > 0.0 && eps_max <= 1.0 && eps_min < eps_max)) throw UsageError("need 0 < eps-min < eps-max <= 1");
      const Fig3Table t = figure3_sweep(p, {n_pair[0], n_pair[1]}, linspace(eps_min, eps_max, eps_points));
      Outputs out(c.out);
      if (c.format == "csv") {
        out.write("fig3.csv", [&](std::ostream& o) { write_fig3_csv(o, t); });
      } else {
        out.write_json("fig3.json", fig3_json(t));
      }
      out.write_manifest(sub, c, args, p);
      if (t.crossover) std::cout << "crossover epsilon " << format_number(*t.crossover) << '\n';
    } else if (sub == fig4) {
      if (!(eps4_min > 0.0 && eps4_max <= 1.0 && eps4_min < eps4_max)) {
        throw UsageError("need 0 < eps-min < eps-max <= 1");
      }
      for (double k : kappas) {
        if (!(k >= 0.0)) throw UsageError("kappas must be >= 0");
      }
      const Fig4Table t = figure4_sweep(kappas, linspace(eps4_min, eps4_max, eps4_points));
      Outputs out(c.out);
      if (c.format == "csv") {
        out.write("fig4.csv", [&](std::ostream& o) { write_fig4_csv(o, t); });
      } else {
        out.write_json("fig4.json", fig4_json(t));
      }
      out.write_manifest(sub, c, args, std::nullopt);
    } else if (sub == validate_cmd) {
      ValidateOptions vo;
      vo.seed = c.seed;
      vo.threads = c.threads;
      vo.samples = validate_samples;
      bool all = true;
      json report = json::array();
      for (const CheckResult& r : run_validation(vo)) {
        all = all && r.passed;
        std::cout << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(30) << r.name << std::right
                  << std::setw(8) << std::fixed << std::setprecision(2) << r.seconds << "s  " << r.detail << '\n';
        report.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
      }
      if (validate_cmd->get_option("--out")->count() > 0) {
        Outputs out(c.out);
        out.write_json("validate.json", {{"schema_version", kSchemaVersion}, {"all_passed", all}, {"checks", report}});
        out.write_manifest(sub, c, args, std::nullopt);
      }
      std::cout << (all ? "all checks passed" : "some checks failed") << '\n';
      return all ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
