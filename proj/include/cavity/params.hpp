#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace cavity {

/// Flat key/value configuration as read from a config file or the command line.
using RawConfig = std::map<std::string, std::string>;

/// Raised for invalid configuration values; key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// @brief Dimensionless configuration of the atoms-cavity system.
///
/// Units: hbar = 1, energies and frequencies in units of the single-atom
/// coupling g, positions in units of 1/k (u = k x). The physics is fully
/// specified by {n_atoms, eta, recoil_ratio, kappa_ext}; the remaining fields
/// control the numerical backends.
struct SystemParams {
  int n_atoms = 1;
  double eta = 0.0;            ///< Lamb-Dicke parameter; k*sigma = sqrt(2)*eta
  double epsilon = 1.0;        ///< trap tightness exp(-2 eta^2), always derived from eta
  double recoil_ratio = 0.0;   ///< (hbar k^2 / 2m) / (hbar g)
  double kappa_ext = 0.0;      ///< extrinsic Lorentzian half-width in units of g
  int n_max_fock = 40;         ///< motional levels kept per atom (Fock backend)
  int grid_points = 256;       ///< grid backend points per atom
  double grid_halfwidth = 8.0; ///< grid backend extent [-L, L] in u

  /// eta == 0: only closed-form tight-limit paths are meaningful.
  bool is_tight_limit() const noexcept { return eta == 0.0; }

  /// Harmonic trap frequency omega_0 / g = recoil_ratio / eta^2.
  double trap_frequency() const;

  /// Motional zero-point energy E_0 = N omega_0 / 2 (units of g).
  double zero_point_energy() const;

  bool operator==(const SystemParams&) const = default;
};

/// Converts a Lamb-Dicke parameter to trap tightness and back.
double epsilon_from_eta(double eta);
double eta_from_epsilon(double epsilon);

/// @brief Builds validated parameters from a key/value map.
///
/// Requires n_atoms, recoil_ratio and exactly one of eta / epsilon. Unknown
/// keys are rejected so typos do not silently fall back to defaults.
SystemParams from_config(const RawConfig& raw);

/// Inverse of from_config; eta is emitted (never epsilon) so the round trip is exact.
RawConfig to_config(const SystemParams& p);

/// Re-runs every field check on an already constructed value.
void validate(const SystemParams& p);

/// @brief Reads a config file.
///
/// Accepted forms: flat `key = value` lines (TOML subset, `#` comments,
/// optional `[section]` headers which are ignored, quoted strings), or a JSON
/// object. A JSON run manifest is also accepted; its "params" object is used.
RawConfig read_config_file(const std::string& path);

/// Parses the flat text form from a string.
RawConfig parse_config_text(const std::string& text);

}  // namespace cavity
