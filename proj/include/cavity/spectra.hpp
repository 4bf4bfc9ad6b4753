#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cavity/hamiltonian.hpp"
#include "cavity/lanczos.hpp"
#include "cavity/spectrum_types.hpp"

namespace cavity {

struct SpectrumOptions {
  /// Dense diagonalization up to this dimension; larger operators use
  /// Lanczos run until the seed's Krylov space is exhausted.
  std::size_t dense_limit = 2048;
  /// Lines below this fraction of the total weight are dropped as dark.
  double weight_cutoff = 1e-12;
  /// Lines closer than this (units of g) are merged into one stick.
  double merge_tol = 1e-10;
  LanczosOptions lanczos;
};

/// Golden-rule sticks |<Psi_j|Psi_I>|^2 at omega_j - E_0, dense or Lanczos per options.
StickSpectrum stick_spectrum(const ManifoldOperator& op, const Eigen::VectorXd& psi_i,
                             const SpectrumOptions& options = {});

/// Always dense. Throws BudgetExceeded above options.dense_limit.
StickSpectrum dense_stick_spectrum(const ManifoldOperator& op, const Eigen::VectorXd& psi_i,
                                   const SpectrumOptions& options = {});

/// Ritz sticks after at most `iterations` Lanczos steps seeded with Psi_I.
StickSpectrum lanczos_spectrum(const ManifoldOperator& op, const Eigen::VectorXd& psi_i, int iterations,
                               const SpectrumOptions& options = {});

/// Sorts, merges coincident lines and drops dust below the weight cutoff.
StickSpectrum normalize_sticks(std::vector<StickLine> lines, SpectrumOrigin origin, double weight_cutoff,
                               double merge_tol);

enum class SummaryMethod { spectrum, perturbative_mc, series };

std::string_view to_string(SummaryMethod method);

/// @brief Weight, mean and variance of one sideband, normalized by the sideband's own weight.
///
/// `empty` marks a side carrying less than kEmptySidebandWeight; mean and
/// variance are then zero and must not be interpreted.
struct SidebandSummary {
  Side side = Side::red;
  double total_weight = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  SummaryMethod method = SummaryMethod::spectrum;
  bool empty = true;
};

inline constexpr double kEmptySidebandWeight = 1e-6;

/// Splits by the sign of omega (origin E_0). Returns {red, blue}.
std::pair<SidebandSummary, SidebandSummary> split_sidebands(const StickSpectrum& s);

struct FrequencyGrid {
  double min = -3.0;
  double max = 3.0;
  int points = 2001;
};

/// Grid spanning every line by `margin_widths` kernel widths on each side.
FrequencyGrid covering_grid(const StickSpectrum& s, double kappa, int points, double margin_widths = 20.0);

struct BroadenedSpectrum {
  std::vector<double> omega;
  std::vector<double> intensity;
  double kernel_width = 0.0;
  bool covers_all_lines = true;  ///< false when some stick lies outside the grid
};

/// Superposition of unit-area Lorentzians of half-width kappa centred on each line.
BroadenedSpectrum convolve(const StickSpectrum& s, double kappa, const FrequencyGrid& grid);

/// Trapezoid integral of a broadened spectrum.
double integrate(const BroadenedSpectrum& b);

/// Raw moments raw[k] = sum w omega^k / sum w and central moments about the mean, k = 0..order.
struct MomentTable {
  double weight = 0.0;
  std::vector<double> raw;
  std::vector<double> central;
};

struct SpectralMoments {
  MomentTable full;
  MomentTable red;
  MomentTable blue;
};

/// Moments up to `order` (<= 4) of the full spectrum and of each sideband.
SpectralMoments spectral_moments(const StickSpectrum& s, int order);

/// One weight-carrying eigenstate with its red/blue internal-state populations.
struct ProjectedLine {
  double omega = 0.0;
  double weight = 0.0;
  double p_plus = 0.0;   ///< <Psi_j|Pi_+|Psi_j>
  double p_minus = 0.0;  ///< <Psi_j|Pi_-|Psi_j>
};

/// @brief Position-local bright-state projections of weight-carrying eigenstates.
///
/// Grid backend only, dense diagonalization. Grid points where all atoms sit
/// on nodes contribute to neither projection.
std::vector<ProjectedLine> projected_lines(const ManifoldOperator& op, const Eigen::VectorXd& psi_i,
                                           double min_weight = 1e-6, const SpectrumOptions& options = {});

}  // namespace cavity
