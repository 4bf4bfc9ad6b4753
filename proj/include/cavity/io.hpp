#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cavity/counting.hpp"
#include "cavity/moments.hpp"
#include "cavity/params.hpp"
#include "cavity/spectra.hpp"

namespace cavity {

/// Bumped whenever a CSV header or JSON layout below changes.
inline constexpr int kSchemaVersion = 1;

/// Shortest text that reads back to the same double ("inf"/"-inf"/"nan" for non-finite).
std::string format_number(double v);

// CSV headers:
//   sticks:      omega,weight
//   broadened:   omega,intensity
//   sidebands:   method,red_weight,red_mean,red_variance,red_empty,blue_weight,blue_mean,blue_variance,blue_empty
//   moments:     n_atoms,eta,n_samples,n_clipped,cutoff,seed,chi,chi_err,chi2,chi2_err,zeta,zeta_err,
//                zeta_chi,zeta_chi_err,zeta_chi2,zeta_chi2_err,zeta_winsorized,zeta_winsorized_err
//   predictions: method,side,mean,mean_err,variance,variance_err,in_validity_domain
//   count:       n_atoms,method,separation,intrinsic_width,extrinsic_width,combined_width,width_multiplier,distinguishable
//   fig3:        epsilon,mean_red_n<lo>,halfwidth_n<lo>,mean_red_n<hi>,halfwidth_n<hi>,overlap
//   fig4:        epsilon,nmax_kappa_<k1>,nmax_kappa_<k2>,...
void write_sticks_csv(std::ostream& out, const StickSpectrum& s);
void write_broadened_csv(std::ostream& out, const BroadenedSpectrum& b);
void write_sidebands_csv(std::ostream& out, const SidebandSummary& red, const SidebandSummary& blue);
void write_moments_csv(std::ostream& out, const MomentEstimates& est);
void write_predictions_csv(std::ostream& out, const std::vector<SidebandPrediction>& predictions);
void write_count_csv(std::ostream& out, const CountingReport& report);
void write_fig3_csv(std::ostream& out, const Fig3Table& table);
void write_fig4_csv(std::ostream& out, const Fig4Table& table);

nlohmann::json params_json(const SystemParams& p);
nlohmann::json sticks_json(const StickSpectrum& s);
nlohmann::json broadened_json(const BroadenedSpectrum& b);
nlohmann::json sidebands_json(const SidebandSummary& red, const SidebandSummary& blue);
nlohmann::json moments_json(const MomentEstimates& est);
nlohmann::json predictions_json(const std::vector<SidebandPrediction>& predictions);
nlohmann::json count_json(const CountingReport& report, const Separation& sep, const NMax& limit);
nlohmann::json fig3_json(const Fig3Table& table);
nlohmann::json fig4_json(const Fig4Table& table);

}  // namespace cavity
