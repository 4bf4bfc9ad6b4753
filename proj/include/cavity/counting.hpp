#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cavity/hamiltonian.hpp"
#include "cavity/moments.hpp"
#include "cavity/params.hpp"
#include "cavity/spectra.hpp"

namespace cavity {

/// Red-sideband mean shift between N and N+1 atoms.
struct Separation {
  double asymptotic = 0.0;  ///< sqrt((1+eps)/(8N)), large-N, g >> recoil
  double exact = 0.0;       ///< difference of the 1/N series means; used for verdicts
};

Separation separation(int n, const SystemParams& params);

enum class CountingRegime { extrinsic, intrinsic, boundary, unbounded };

std::string_view to_string(CountingRegime regime);

struct NMax {
  double value = 0.0;  ///< +inf when unbounded
  bool unbounded = false;
  CountingRegime regime = CountingRegime::intrinsic;
};

/// N_max = (1+eps) / (8 kappa^2 + (1/2)(1-eps)^2(1+eps)), kappa in units of g.
/// The regime is extrinsic when 16 kappa^2 > (1-eps)^2, intrinsic when smaller.
NMax n_max(double epsilon, double kappa_over_g);

/// @brief Atom-counting verdict for N versus N+1.
///
/// Widths are multiplier * RMS (multiplier 1 by default) and add in quadrature.
struct CountingReport {
  int n_atoms = 1;
  double separation = 0.0;
  double intrinsic_width = 0.0;
  double extrinsic_width = 0.0;
  double combined_width = 0.0;
  bool distinguishable = false;
  SummaryMethod method = SummaryMethod::series;
  double width_multiplier = 1.0;
};

/// Builds a report from red-sideband means at N and N+1 and the red variance at N.
CountingReport make_report(int n, double mean_n, double mean_n_plus_1, double variance_n, double kappa,
                           double width_multiplier, SummaryMethod method);

CountingReport count_series(int n, const SystemParams& params, double width_multiplier = 1.0);
CountingReport count_perturbative(int n, const SystemParams& params, const MonteCarloOptions& mc,
                                  double width_multiplier = 1.0);
CountingReport count_spectrum(int n, const SystemParams& params, Backend backend, const SpectrumOptions& options = {},
                              double width_multiplier = 1.0);

/// One trap tightness of the N versus N+1 red-sideband band plot.
struct Fig3Row {
  double epsilon = 0.0;
  double mean_low = 0.0;        ///< red mean for the smaller atom number
  double halfwidth_low = 0.0;   ///< sqrt(variance) / 2
  double mean_high = 0.0;
  double halfwidth_high = 0.0;
  bool overlap = false;
};

struct Fig3Table {
  int n_low = 8;
  int n_high = 9;
  double recoil_ratio = 0.01;
  std::vector<Fig3Row> rows;
  std::optional<double> crossover;  ///< largest epsilon at which the bands touch
};

/// Series red-sideband bands for two atom numbers over an epsilon grid.
Fig3Table figure3_sweep(const SystemParams& base, std::pair<int, int> n_pair, const std::vector<double>& epsilon_grid);

struct Fig4Table {
  std::vector<double> kappas;
  std::vector<double> epsilons;
  std::vector<std::vector<double>> n_max;  ///< n_max[row = epsilon][column = kappa]
  std::vector<bool> monotone;              ///< per kappa column, nondecreasing in epsilon
};

Fig4Table figure4_sweep(const std::vector<double>& kappas, const std::vector<double>& epsilon_grid);

/// `points` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace cavity
