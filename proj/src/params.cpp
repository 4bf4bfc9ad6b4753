#include "cavity/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cavity {

namespace {

const std::set<std::string> kKnownKeys = {
    "n_atoms",   "eta",        "epsilon",     "recoil_ratio",
    "kappa_ext", "n_max_fock", "grid_points", "grid_halfwidth"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(const RawConfig& raw, const std::string& key) {
  const std::string& text = raw.at(key);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key, "expected a real number, got '" + text + "'");
  if (!std::isfinite(value)) throw ConfigError(key, "must be finite");
  return value;
}

int parse_int(const RawConfig& raw, const std::string& key) {
  const std::string& text = raw.at(key);
  long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
  if (value > 1'000'000'000LL || value < -1'000'000'000LL) throw ConfigError(key, "out of range");
  return static_cast<int>(value);
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double epsilon_from_eta(double eta) { return std::exp(-2.0 * eta * eta); }

double eta_from_epsilon(double epsilon) { return std::sqrt(-0.5 * std::log(epsilon)); }

double SystemParams::trap_frequency() const {
  if (eta <= 0.0) throw std::domain_error("trap frequency undefined in the eta = 0 limit");
  return recoil_ratio / (eta * eta);
}

double SystemParams::zero_point_energy() const { return 0.5 * n_atoms * trap_frequency(); }

void validate(const SystemParams& p) {
  if (p.n_atoms < 1) throw ConfigError("n_atoms", "n_atoms must be >= 1");
  if (!(p.eta >= 0.0) || !std::isfinite(p.eta)) throw ConfigError("eta", "must be a nonnegative real");
  if (!(p.epsilon > 0.0 && p.epsilon <= 1.0)) throw ConfigError("epsilon", "must lie in (0, 1]");
  if (p.epsilon != epsilon_from_eta(p.eta)) throw ConfigError("epsilon", "inconsistent with eta");
  if (!(p.recoil_ratio >= 0.0)) throw ConfigError("recoil_ratio", "must be >= 0");
  if (!(p.kappa_ext >= 0.0)) throw ConfigError("kappa_ext", "must be >= 0");
  if (p.n_max_fock < 2) throw ConfigError("n_max_fock", "must be >= 2");
  if (p.grid_points < 2) throw ConfigError("grid_points", "must be >= 2");
  if (!(p.grid_halfwidth > 0.0)) throw ConfigError("grid_halfwidth", "must be > 0");
}

SystemParams from_config(const RawConfig& raw) {
  for (const auto& [key, value] : raw) {
    if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown key");
  }
  for (const char* key : {"n_atoms", "recoil_ratio"}) {
    if (!raw.contains(key)) throw ConfigError(key, "required key missing");
  }
  const bool has_eta = raw.contains("eta");
  const bool has_eps = raw.contains("epsilon");
  if (has_eta == has_eps) throw ConfigError("eta", "exactly one of eta or epsilon must be given");

  SystemParams p;
  p.n_atoms = parse_int(raw, "n_atoms");
  if (p.n_atoms < 1) throw ConfigError("n_atoms", "n_atoms must be >= 1");

  if (has_eta) {
    p.eta = parse_real(raw, "eta");
    if (p.eta < 0.0) throw ConfigError("eta", "must be >= 0");
  } else {
    const double eps = parse_real(raw, "epsilon");
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("epsilon", "must lie in (0, 1]");
    p.eta = eta_from_epsilon(eps);
  }
  p.epsilon = epsilon_from_eta(p.eta);

  p.recoil_ratio = parse_real(raw, "recoil_ratio");
  if (raw.contains("kappa_ext")) p.kappa_ext = parse_real(raw, "kappa_ext");
  if (raw.contains("n_max_fock")) p.n_max_fock = parse_int(raw, "n_max_fock");
  if (raw.contains("grid_points")) p.grid_points = parse_int(raw, "grid_points");
  if (raw.contains("grid_halfwidth")) p.grid_halfwidth = parse_real(raw, "grid_halfwidth");

  validate(p);
  return p;
}

RawConfig to_config(const SystemParams& p) {
  return {
      {"n_atoms", std::to_string(p.n_atoms)},
      {"eta", format_real(p.eta)},
      {"recoil_ratio", format_real(p.recoil_ratio)},
      {"kappa_ext", format_real(p.kappa_ext)},
      {"n_max_fock", std::to_string(p.n_max_fock)},
      {"grid_points", std::to_string(p.grid_points)},
      {"grid_halfwidth", format_real(p.grid_halfwidth)},
  };
}

RawConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    if (raw.contains(key)) throw ConfigError(key, "duplicate key");
    raw[key] = value;
  }
  return raw;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return parse_config_text(text);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  const nlohmann::json& obj = doc.contains("params") ? doc.at("params") : doc;
  if (!obj.is_object()) throw ConfigError("config", "expected a JSON object");
  RawConfig raw;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_string()) {
      raw[key] = value.get<std::string>();
    } else if (value.is_number_integer()) {
      raw[key] = std::to_string(value.get<long long>());
    } else if (value.is_number()) {
      raw[key] = format_real(value.get<double>());
    } else {
      throw ConfigError(key, "expected a number or string");
    }
  }
  return raw;
}

}  // namespace cavity
