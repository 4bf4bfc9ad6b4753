#include "cavity/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace cavity {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json side_json(const SidebandSummary& s) {
  return {{"side", to_string(s.side)},       {"empty", s.empty},
          {"total_weight", s.total_weight},  {"mean", s.empty ? json(nullptr) : json(s.mean)},
          {"variance", s.empty ? json(nullptr) : json(s.variance)}, {"method", to_string(s.method)}};
}

json estimate_json(const Estimate& e) { return {{"estimate", e.value}, {"std_error", e.std_error}}; }

std::string kappa_label(double k) { return "nmax_kappa_" + format_number(k); }

}  // namespace

void write_sticks_csv(std::ostream& out, const StickSpectrum& s) {
  out << "omega,weight\n";
  for (const auto& l : s.lines) out << format_number(l.omega) << ',' << format_number(l.weight) << '\n';
}

void write_broadened_csv(std::ostream& out, const BroadenedSpectrum& b) {
  out << "omega,intensity\n";
  for (std::size_t k = 0; k < b.omega.size(); ++k) {
    out << format_number(b.omega[k]) << ',' << format_number(b.intensity[k]) << '\n';
  }
}

void write_sidebands_csv(std::ostream& out, const SidebandSummary& red, const SidebandSummary& blue) {
  out << "method,red_weight,red_mean,red_variance,red_empty,blue_weight,blue_mean,blue_variance,blue_empty\n";
  out << to_string(red.method);
  for (const auto* s : {&red, &blue}) {
    out << ',' << format_number(s->total_weight) << ',' << (s->empty ? "" : format_number(s->mean)) << ','
        << (s->empty ? "" : format_number(s->variance)) << ',' << (s->empty ? 1 : 0);
  }
  out << '\n';
}

void write_moments_csv(std::ostream& out, const MomentEstimates& e) {
  out << "n_atoms,eta,n_samples,n_clipped,cutoff,seed,chi,chi_err,chi2,chi2_err,zeta,zeta_err,"
         "zeta_chi,zeta_chi_err,zeta_chi2,zeta_chi2_err,zeta_winsorized,zeta_winsorized_err\n";
  out << e.n_atoms << ',' << format_number(e.eta) << ',' << e.n_samples << ',' << e.n_clipped << ','
      << format_number(e.cutoff) << ',' << e.seed;
  for (const Estimate* x : {&e.e_chi, &e.e_chi2, &e.e_zeta, &e.e_zeta_chi, &e.e_zeta_chi2, &e.e_zeta_winsorized}) {
    out << ',' << format_number(x->value) << ',' << format_number(x->std_error);
  }
  out << '\n';
}

void write_predictions_csv(std::ostream& out, const std::vector<SidebandPrediction>& predictions) {
  out << "method,side,mean,mean_err,variance,variance_err,in_validity_domain\n";
  for (const auto& p : predictions) {
    out << to_string(p.method) << ',' << to_string(p.side) << ',' << format_number(p.mean) << ','
        << format_number(p.mean_error) << ',' << format_number(p.variance) << ',' << format_number(p.variance_error)
        << ',' << (p.in_validity_domain ? 1 : 0) << '\n';
  }
}

void write_count_csv(std::ostream& out, const CountingReport& r) {
  out << "n_atoms,method,separation,intrinsic_width,extrinsic_width,combined_width,width_multiplier,distinguishable\n";
  out << r.n_atoms << ',' << to_string(r.method) << ',' << format_number(r.separation) << ','
      << format_number(r.intrinsic_width) << ',' << format_number(r.extrinsic_width) << ','
      << format_number(r.combined_width) << ',' << format_number(r.width_multiplier) << ','
      << (r.distinguishable ? 1 : 0) << '\n';
}

void write_fig3_csv(std::ostream& out, const Fig3Table& t) {
  const std::string lo = std::to_string(t.n_low);
  const std::string hi = std::to_string(t.n_high);
  out << "epsilon,mean_red_n" << lo << ",halfwidth_n" << lo << ",mean_red_n" << hi << ",halfwidth_n" << hi
      << ",overlap\n";
  for (const auto& r : t.rows) {
    out << format_number(r.epsilon) << ',' << format_number(r.mean_low) << ',' << format_number(r.halfwidth_low)
        << ',' << format_number(r.mean_high) << ',' << format_number(r.halfwidth_high) << ',' << (r.overlap ? 1 : 0)
        << '\n';
  }
}

void write_fig4_csv(std::ostream& out, const Fig4Table& t) {
  out << "epsilon";
  for (double k : t.kappas) out << ',' << kappa_label(k);
  out << '\n';
  for (std::size_t r = 0; r < t.epsilons.size(); ++r) {
    out << format_number(t.epsilons[r]);
    for (double v : t.n_max[r]) out << ',' << format_number(v);
    out << '\n';
  }
}

json params_json(const SystemParams& p) {
  json j = json::object();
  for (const auto& [key, value] : to_config(p)) j[key] = value;
  return j;
}

json sticks_json(const StickSpectrum& s) {
  json lines = json::array();
  for (const auto& l : s.lines) lines.push_back({l.omega, l.weight});
  return {{"schema_version", kSchemaVersion},
          {"origin", to_string(s.origin)},
          {"columns", {"omega", "weight"}},
          {"lines", lines}};
}

json broadened_json(const BroadenedSpectrum& b) {
  return {{"schema_version", kSchemaVersion},
          {"kernel_width", b.kernel_width},
          {"covers_all_lines", b.covers_all_lines},
          {"omega", b.omega},
          {"intensity", b.intensity}};
}

json sidebands_json(const SidebandSummary& red, const SidebandSummary& blue) {
  return {{"schema_version", kSchemaVersion}, {"red", side_json(red)}, {"blue", side_json(blue)}};
}

json moments_json(const MomentEstimates& e) {
  return {{"schema_version", kSchemaVersion},
          {"n_atoms", e.n_atoms},
          {"eta", e.eta},
          {"n_samples", e.n_samples},
          {"n_clipped", e.n_clipped},
          {"clipped_fraction", static_cast<double>(e.n_clipped) / static_cast<double>(e.n_samples)},
          {"cutoff", e.cutoff},
          {"seed", e.seed},
          {"chi", estimate_json(e.e_chi)},
          {"chi2", estimate_json(e.e_chi2)},
          {"zeta", estimate_json(e.e_zeta)},
          {"zeta_chi", estimate_json(e.e_zeta_chi)},
          {"zeta_chi2", estimate_json(e.e_zeta_chi2)},
          {"zeta_winsorized", estimate_json(e.e_zeta_winsorized)},
          {"var_chi", estimate_json(e.var_chi())}};
}

json predictions_json(const std::vector<SidebandPrediction>& predictions) {
  json arr = json::array();
  for (const auto& p : predictions) {
    arr.push_back({{"method", to_string(p.method)},
                   {"side", to_string(p.side)},
                   {"mean", p.mean},
                   {"mean_error", p.mean_error},
                   {"variance", p.variance},
                   {"variance_error", p.variance_error},
                   {"in_validity_domain", p.in_validity_domain}});
  }
  return {{"schema_version", kSchemaVersion}, {"predictions", arr}};
}

json count_json(const CountingReport& r, const Separation& sep, const NMax& limit) {
  return {{"schema_version", kSchemaVersion},
          {"n_atoms", r.n_atoms},
          {"method", to_string(r.method)},
          {"separation", r.separation},
          {"separation_asymptotic", sep.asymptotic},
          {"separation_series", sep.exact},
          {"intrinsic_width", r.intrinsic_width},
          {"extrinsic_width", r.extrinsic_width},
          {"combined_width", r.combined_width},
          {"width_multiplier", r.width_multiplier},
          {"distinguishable", r.distinguishable},
          {"n_max", number_or_null(limit.value)},
          {"n_max_unbounded", limit.unbounded},
          {"n_max_regime", to_string(limit.regime)}};
}

json fig3_json(const Fig3Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"mean_low", r.mean_low},
                    {"halfwidth_low", r.halfwidth_low},
                    {"mean_high", r.mean_high},
                    {"halfwidth_high", r.halfwidth_high},
                    {"overlap", r.overlap}});
  }
  return {{"schema_version", kSchemaVersion},
          {"n_low", t.n_low},
          {"n_high", t.n_high},
          {"recoil_ratio", t.recoil_ratio},
          {"crossover_epsilon", t.crossover ? json(*t.crossover) : json(nullptr)},
          {"rows", rows}};
}

json fig4_json(const Fig4Table& t) {
  json cols = json::array();
  for (std::size_t c = 0; c < t.kappas.size(); ++c) {
    json values = json::array();
    for (const auto& row : t.n_max) values.push_back(number_or_null(row[c]));
    cols.push_back({{"kappa", t.kappas[c]}, {"monotone_in_epsilon", static_cast<bool>(t.monotone[c])}, {"n_max", values}});
  }
  return {{"schema_version", kSchemaVersion}, {"epsilon", t.epsilons}, {"columns", cols}};
}

}  // namespace cavity
