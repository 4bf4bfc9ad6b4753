// Acceptance criteria 1-8: one PASS/FAIL line each, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cavity/counting.hpp"
#include "cavity/geometry.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/moments.hpp"
#include "cavity/spectra.hpp"
#include "cavity/validate.hpp"

using namespace cavity;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

SystemParams params(int n, double eps, double r) {
  SystemParams p;
  p.n_atoms = n;
  p.eta = eta_from_epsilon(eps);
  p.epsilon = epsilon_from_eta(p.eta);
  p.recoil_ratio = r;
  return p;
}

MonteCarloOptions mc(long long samples) {
  MonteCarloOptions o;
  o.n_samples = samples;
  o.seed = 20240601;
  return o;
}

// <cos^2 u> for u ~ N(0, s^2) by trapezoid quadrature.
double cos2_quadrature(double s) {
  const int m = 100001;
  const double lo = -14 * s, hi = 14 * s, h = (hi - lo) / (m - 1);
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const double u = lo + k * h;
    sum += ((k == 0 || k == m - 1) ? 0.5 : 1.0) * std::cos(u) * std::cos(u) * std::exp(-u * u / (2 * s * s));
  }
  return sum * h / (std::sqrt(2 * M_PI) * s);
}

Outcome tavis_cummings() {
  Outcome o{true, ""};
  std::ostringstream d;
  for (int n : {1, 2, 3}) {
    SystemParams p;
    p.n_atoms = n;
    p.eta = 0.01;
    p.epsilon = epsilon_from_eta(p.eta);
    p.recoil_ratio = 0.01;
    p.n_max_fock = suggested_fock_dim(p.eta);
    const MotionalBasis basis = make_basis(p, Backend::fock);
    const StickSpectrum s = dense_stick_spectrum(assemble(p, basis), initial_state(p, basis));
    StickLine red{0, -1}, blue{0, -1};
    for (const auto& l : s.lines) {
      StickLine& slot = l.omega < 0 ? red : blue;
      if (l.weight > slot.weight) slot = l;
    }
    const double root = std::sqrt(double(n));
    const bool ok = std::abs(red.omega + root) < 1e-2 && std::abs(blue.omega - root) < 1e-2 &&
                    red.weight + blue.weight > 0.99 && std::abs(red.weight - 0.5) <= 0.01 &&
                    std::abs(blue.weight - 0.5) <= 0.01;
    o.passed = o.passed && ok;
    d << "N=" << n << " lines " << red.omega << "/" << blue.omega << " weights " << red.weight << "/" << blue.weight
      << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome sum_rules() {
  Outcome o{true, ""};
  double ew = 0, em = 0, ev = 0;
  for (int n : {1, 2}) {
    for (double eps : {0.2, 0.5, 0.9}) {
      SystemParams p = params(n, eps, 0.01);
      p.n_max_fock = suggested_fock_dim(p.eta);
      const MotionalBasis basis = make_basis(p, Backend::fock);
      const SpectralMoments m = spectral_moments(stick_spectrum(assemble(p, basis), initial_state(p, basis)), 2);
      const double expected = n * cos2_quadrature(p.eta);
      ew = std::max(ew, std::abs(m.full.weight - 1));
      em = std::max(em, std::abs(m.full.raw[1]));
      ev = std::max(ev, std::abs(m.full.central[2] - expected) / expected);
    }
  }
  o.passed = ew < 1e-9 && em < 1e-8 && ev < 1e-6;
  std::ostringstream d;
  d << "max |sum w - 1| " << ew << ", max |mean - E0| " << em << ", max rel variance error " << ev;
  o.detail = d.str();
  return o;
}

Outcome series_vs_mc() {
  Outcome o{true, ""};
  std::ostringstream d;
  for (double eps : {0.3, 0.5, 0.8}) {
    const SystemParams p = params(100, eps, 0.0);
    const MomentEstimates e = mc_moments(p, mc(1'000'000));
    const double m_mc = perturbative_sideband(e, p, Side::blue).mean;
    const double m_series = series_sideband(p, Side::blue).mean;
    const double rel = std::abs(m_mc - m_series) / std::abs(m_series);
    o.passed = o.passed && rel < 5e-3;
    d << "eps=" << eps << " MC " << m_mc << " series " << m_series << " rel " << rel << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome exact_vs_perturbative() {
  const SystemParams p = params(2, 0.5, 0.01);
  const MotionalBasis basis = make_basis(p, Backend::fock);
  const StickSpectrum s = stick_spectrum(assemble(p, basis), initial_state(p, basis));
  const auto [red, blue] = split_sidebands(s);
  const double pert = perturbative_sideband(mc_moments(p, mc(1'000'000)), p, Side::red).mean;
  std::ostringstream d;
  d << "dim " << basis.total_dim << " (" << to_string(s.origin) << "), spectrum red mean " << red.mean
    << ", perturbative " << pert << ", |diff| " << std::abs(red.mean - pert);
  return {!red.empty && std::abs(red.mean - pert) < 0.05, d.str()};
}

Outcome loose_variance() {
  const SystemParams p = params(200, 0.05, 0.0);
  const MomentEstimates e = mc_moments(p, mc(1'000'000));
  const double var = e.e_chi2.value - e.e_chi.value * e.e_chi.value;
  const double sixteenth = (1 - p.epsilon) * (1 - p.epsilon) * (1 + p.epsilon) / 16;
  const double eighth = 0.125;
  const bool a = std::abs(var - sixteenth) <= 0.05 * sixteenth;
  const bool b = std::abs(var - eighth) <= 0.05 * eighth;
  ValidateOptions vo;
  vo.seed = 20240601;
  const CheckResult report = check_loose_variance(vo);
  const std::string named = a ? "winner=series_1_over_16" : "winner=loose_1_over_8";
  std::ostringstream d;
  d << "MC Var(chi) " << var << " vs (1/16)(1-eps)^2(1+eps) " << sixteenth << " and 1/8; validate: " << report.detail;
  return {(a != b) && report.passed && report.detail.find(named) != std::string::npos, d.str()};
}

Outcome counting_endpoints() {
  const double tight = n_max(1 - 1e-9, 0.1).value;
  const double loose = n_max(1e-9, 0.1).value;
  const double loose_ref = 1 / (0.5 + 0.08);
  std::ostringstream d;
  d << "N_max tight " << tight << " (25), loose " << loose << " (" << loose_ref << ")";
  return {std::abs(tight - 25) <= 1e-3 * 25 && std::abs(loose - loose_ref) <= 1e-3 * loose_ref, d.str()};
}

Outcome figure3() {
  SystemParams base;
  base.recoil_ratio = 0.01;
  const Fig3Table t = figure3_sweep(base, {8, 9}, linspace(0.01, 1.0, 100));
  bool ok = t.crossover.has_value();
  int high = 0, low = 0;
  for (const auto& r : t.rows) {
    if (r.epsilon >= 0.95) {
      ++high;
      ok = ok && !r.overlap;
    }
    if (r.epsilon <= 0.2) {
      ++low;
      ok = ok && r.overlap;
    }
  }
  std::ostringstream d;
  d << high << " rows with eps >= 0.95 separated, " << low << " rows with eps <= 0.2 overlapping, crossover eps* "
    << (t.crossover ? *t.crossover : std::nan(""));
  return {ok && high > 0 && low > 0, d.str()};
}

Outcome figure4() {
  const std::vector<double> kappas = {0.0, 0.01, 0.05, 0.1, 0.2, 0.5};
  const Fig4Table t = figure4_sweep(kappas, linspace(0.001, 0.999, 999));
  double worst = 0;
  bool increasing = true;
  for (std::size_t r = 0; r < t.epsilons.size(); ++r) {
    const double om = 1 - t.epsilons[r];
    worst = std::max(worst, std::abs(t.n_max[r][0] - 2 / (om * om)) / (2 / (om * om)));
    for (std::size_t c = 0; r > 0 && c < kappas.size(); ++c) increasing = increasing && t.n_max[r][c] > t.n_max[r - 1][c];
  }
  std::ostringstream d;
  d << "kappa=0 column max rel deviation from 2/(1-eps)^2 " << worst << (increasing ? ", " : ", not ")
    << "strictly increasing in eps for " << kappas.size() << " kappa columns";
  return {worst <= 1e-15 && increasing, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Tavis-Cummings recovery", 60, tavis_cummings},
      {2, "sum rules", 60, sum_rules},
      {3, "series vs Monte Carlo mean", 30, series_vs_mc},
      {4, "exact diagonalization vs perturbative", 120, exact_vs_perturbative},
      {5, "loose-limit variance adjudication", 30, loose_variance},
      {6, "counting endpoints", 1, counting_endpoints},
      {7, "figure 3 reproduction", 10, figure3},
      {8, "figure 4 reproduction", 1, figure4},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool ok = o.passed && in_time;
    failures += ok ? 0 : 1;
    std::printf("[%s] %d. %s (%.2fs, limit %.0fs%s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_seconds, in_time ? "" : ", TOO SLOW", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
