#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cavity/params.hpp"
#include "cavity/spectrum_types.hpp"

namespace cavity {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct MonteCarloOptions {
  long long n_samples = 1'000'000;
  std::uint64_t seed = 1;
  int threads = 0;            ///< 0: hardware concurrency; never changes the result
  int batches = 100;          ///< independent RNG streams, also the batch-means blocks
  double cutoff = -1.0;       ///< chi^2 clip threshold; negative selects 1e-6 * N
  double winsor_fraction = 1e-3;
};

/// Index of each accumulated functional inside the per-batch sums.
enum MomentIndex { kChi = 0, kChi2, kZeta, kZetaChi, kZetaChi2, kMomentCount };

/// @brief Monte Carlo estimates of Gaussian expectations of chi and zeta functionals.
///
/// Positions u_i are drawn independently from the ground-state density
/// (zero mean, standard deviation eta). Samples with chi^2 below the cutoff
/// contribute zero to the zeta functionals, i.e. the node region is excised
/// from those integrals; chi and chi^2 use every sample.
struct MomentEstimates {
  Estimate e_chi;
  Estimate e_chi2;
  Estimate e_zeta;
  Estimate e_zeta_chi;
  Estimate e_zeta_chi2;
  Estimate e_zeta_winsorized;
  long long n_samples = 0;
  long long n_clipped = 0;
  double cutoff = 0.0;
  int n_atoms = 0;
  double eta = 0.0;
  std::uint64_t seed = 0;

  /// Per-batch sums and sample counts, kept for jackknife error propagation.
  std::vector<std::array<double, kMomentCount>> batch_sums;
  std::vector<long long> batch_counts;

  /// Var(chi) = <chi^2> - <chi>^2 with a jackknife error.
  Estimate var_chi() const;
};

MomentEstimates mc_moments(const SystemParams& params, const MonteCarloOptions& options);

enum class PredictionMethod { perturbative_mc, series_1_over_N, tight_limit, loose_limit };

std::string_view to_string(PredictionMethod method);

/// Sideband mean (relative to E_0) and variance in units of g and g^2.
struct SidebandPrediction {
  Side side = Side::red;
  double mean = 0.0;
  double variance = 0.0;
  double mean_error = 0.0;      ///< statistical, Monte Carlo route only
  double variance_error = 0.0;
  PredictionMethod method = PredictionMethod::series_1_over_N;
  bool in_validity_domain = true;  ///< heuristic flag for the limit formulas
};

/// @brief First-order perturbative sideband moments from Monte Carlo expectations.
///
/// Blue side:
///   mean     = <chi> + (r/2)<zeta> + (r/2)(<zeta><chi> - <zeta chi>)/<chi>
///   variance = Var(chi) + r[(<zeta chi^2> + <zeta><chi^2>)/<chi> - 2<zeta><chi>]
/// The red side flips the sign of <chi> in the mean and of the r-linear variance term.
/// Throws when <chi> is statistically indistinguishable from zero.
SidebandPrediction perturbative_sideband(const MomentEstimates& est, const SystemParams& params, Side side);

/// Closed-form 1/N series for the sideband mean and variance.
SidebandPrediction series_sideband(const SystemParams& params, Side side);

/// Expansion in small k*sigma (k^2 sigma^2 = 2 eta^2). Flagged valid for k^2 sigma^2 <= 0.2.
SidebandPrediction tight_limit(const SystemParams& params, Side side);

/// epsilon -> 0 closed forms. Flagged valid for epsilon <= 0.05.
SidebandPrediction loose_limit(const SystemParams& params, Side side);

/// Outcome of testing Monte Carlo Var(chi) against the two loose-trap variance constants.
struct VarianceAdjudication {
  Estimate mc_variance;
  double series_value = 0.0;  ///< (1/16)(1-eps)^2(1+eps)
  double loose_value = 0.0;   ///< 1/8
  double tolerance = 0.05;
  bool series_matches = false;
  bool loose_matches = false;
  std::string winner;         ///< "series_1_over_16", "loose_1_over_8", "both" or "none"
};

VarianceAdjudication adjudicate_loose_variance(const SystemParams& params, const MonteCarloOptions& options,
                                               double tolerance = 0.05);

}  // namespace cavity
