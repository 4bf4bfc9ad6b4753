#include "cavity/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "cavity/counting.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/moments.hpp"
#include "cavity/spectra.hpp"

namespace cavity {

namespace {

SystemParams make_params(int n, double eps, double r) {
  SystemParams p;
  p.n_atoms = n;
  p.eta = eta_from_epsilon(eps);
  p.epsilon = epsilon_from_eta(p.eta);
  p.recoil_ratio = r;
  return p;
}

template <class F>
CheckResult timed(std::string name, F&& body) {
  CheckResult c;
  c.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::ostringstream detail;
    detail.precision(6);
    c.passed = body(detail);
    c.detail = detail.str();
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

MonteCarloOptions mc_options(const ValidateOptions& o, long long samples) {
  MonteCarloOptions mc;
  mc.n_samples = samples;
  mc.seed = o.seed;
  mc.threads = o.threads;
  return mc;
}

}  // namespace

CheckResult check_sum_rules(const CosMatrixFn& cos_matrix) {
  return timed("sum_rules", [&](std::ostream& d) {
    bool ok = true;
    double worst_w = 0.0, worst_mean = 0.0, worst_var = 0.0, worst_fourth = 0.0;
    for (int n : {1, 2}) {
      for (double eps : {0.2, 0.5, 0.9}) {
        SystemParams p = make_params(n, eps, 0.01);
        p.n_max_fock = suggested_fock_dim(p.eta);
        const MotionalBasis basis = make_basis(p, Backend::fock);
        const ManifoldOperator op = assemble_fock(p, basis, cos_matrix(p.eta, p.n_max_fock));
        const StickSpectrum s = stick_spectrum(op, initial_state(p, basis));
        const SpectralMoments m = spectral_moments(s, 2);
        const double expected_var = n * (1.0 + p.epsilon) / 2.0;
        const double ew = std::abs(m.full.weight - 1.0);
        const double em = std::abs(m.full.raw[1]);
        const double ev = std::abs(m.full.central[2] - expected_var) / expected_var;
        worst_w = std::max(worst_w, ew);
        worst_mean = std::max(worst_mean, em);
        worst_var = std::max(worst_var, ev);
        ok = ok && ew < 1e-9 && em < 1e-8 && ev < 1e-6;

        // Without motion the fourth moment is <chi^4>, which probes the whole cos matrix.
        SystemParams frozen = p;
        frozen.recoil_ratio = 0.0;
        const ManifoldOperator op0 = assemble_fock(frozen, basis, cos_matrix(p.eta, p.n_max_fock));
        const double raw4 = spectral_moments(stick_spectrum(op0, initial_state(frozen, basis)), 4).full.raw[4];
        const double x = p.eta * p.eta;
        const double c2 = (1.0 + std::exp(-2.0 * x)) / 2.0;
        const double c4 = (3.0 + 4.0 * std::exp(-2.0 * x) + std::exp(-8.0 * x)) / 8.0;
        const double expected4 = n * c4 + n * (n - 1) * c2 * c2;
        const double e4 = std::abs(raw4 - expected4) / expected4;
        worst_fourth = std::max(worst_fourth, e4);
        ok = ok && e4 < 1e-6;
      }
    }
    d << "max |weight-1|=" << worst_w << " max |mean-E0|=" << worst_mean << " max rel var err=" << worst_var
      << " max rel fourth-moment err=" << worst_fourth;
    return ok;
  });
}

CheckResult check_tavis_cummings() {
  return timed("tavis_cummings_recovery", [](std::ostream& d) {
    bool ok = true;
    for (int n : {1, 2, 3}) {
      SystemParams p;
      p.n_atoms = n;
      p.eta = 0.01;
      p.epsilon = epsilon_from_eta(p.eta);
      p.recoil_ratio = 0.01;
      p.n_max_fock = suggested_fock_dim(p.eta);
      const MotionalBasis basis = make_basis(p, Backend::fock);
      const StickSpectrum s = dense_stick_spectrum(assemble(p, basis), initial_state(p, basis));
      StickLine red{0.0, -1.0}, blue{0.0, -1.0};
      for (const auto& l : s.lines) {
        StickLine& slot = l.omega < 0.0 ? red : blue;
        if (l.weight > slot.weight) slot = l;
      }
      const double root = std::sqrt(static_cast<double>(n));
      const bool pass = std::abs(red.omega + root) < 1e-2 && std::abs(blue.omega - root) < 1e-2 &&
                        red.weight + blue.weight > 0.99 && std::abs(red.weight - 0.5) <= 0.01 &&
                        std::abs(blue.weight - 0.5) <= 0.01;
      d << "N=" << n << ": " << red.omega << "(" << red.weight << ") " << blue.omega << "(" << blue.weight << "); ";
      ok = ok && pass;
    }
    return ok;
  });
}

CheckResult check_lanczos_vs_dense() {
  return timed("lanczos_vs_dense", [](std::ostream& d) {
    SystemParams p = make_params(2, 0.5, 0.05);
    p.n_max_fock = 12;
    const MotionalBasis basis = make_basis(p, Backend::fock);
    const ManifoldOperator op = assemble(p, basis);
    const Eigen::VectorXd psi = initial_state(p, basis);
    const SpectralMoments a = spectral_moments(dense_stick_spectrum(op, psi), 4);
    const SpectralMoments b = spectral_moments(lanczos_spectrum(op, psi, static_cast<int>(op.dim())), 4);
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) worst = std::max(worst, std::abs(a.full.raw[k] - b.full.raw[k]));
    d << "dim=" << op.dim() << " max raw-moment diff (k<=4)=" << worst;
    return worst < 1e-9;
  });
}

CheckResult check_fock_vs_grid() {
  return timed("fock_vs_grid", [](std::ostream& d) {
    SystemParams p;
    p.n_atoms = 1;
    p.eta = 0.5;
    p.epsilon = epsilon_from_eta(p.eta);
    p.recoil_ratio = 0.01;
    p.n_max_fock = 80;
    auto lowest = [&](Backend b) {
      const MotionalBasis basis = make_basis(p, b);
      const StickSpectrum s = stick_spectrum(assemble(p, basis), initial_state(p, basis));
      std::vector<StickLine> out;
      for (const auto& l : s.lines) {
        if (l.weight > 1e-3 && out.size() < 5) out.push_back(l);
      }
      return out;
    };
    const auto f = lowest(Backend::fock);
    const auto g = lowest(Backend::grid);
    if (f.size() != 5 || g.size() != 5) {
      d << "expected five weighted lines, got " << f.size() << " and " << g.size();
      return false;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < 5; ++k) worst = std::max(worst, std::abs(f[k].omega - g[k].omega));
    d << "max |omega_fock - omega_grid| over lowest five lines=" << worst;
    return worst < 1e-4;
  });
}

CheckResult check_series_limits() {
  return timed("series_limits", [](std::ostream& d) {
    bool ok = true;
    // epsilon = 1: sticks at +-sqrt(N), zero width
    for (int n : {1, 4, 16}) {
      SystemParams p;
      p.n_atoms = n;
      p.recoil_ratio = 0.01;
      for (Side side : {Side::red, Side::blue}) {
        const auto s = series_sideband(p, side);
        const double expect = (side == Side::blue ? 1.0 : -1.0) * std::sqrt(static_cast<double>(n));
        ok = ok && std::abs(s.mean - expect) < 1e-12 && std::abs(s.variance) < 1e-15;
      }
    }
    // Near epsilon = 1 the series and the tight expansion agree to second order in k^2 sigma^2.
    double worst = 0.0;
    for (int n : {1, 8, 64}) {
      SystemParams p;
      p.n_atoms = n;
      p.eta = std::sqrt(0.5e-3);
      p.epsilon = epsilon_from_eta(p.eta);
      p.recoil_ratio = 0.01;
      for (Side side : {Side::red, Side::blue}) {
        const auto s = series_sideband(p, side);
        const auto t = tight_limit(p, side);
        worst = std::max(worst, std::abs(s.mean - t.mean) / std::sqrt(static_cast<double>(n)));
        worst = std::max(worst, std::abs(s.variance - t.variance) / t.variance);
      }
    }
    d << "max relative series/tight mismatch at k^2 sigma^2=1e-3: " << worst;
    return ok && worst < 1e-2;
  });
}

CheckResult check_mc_vs_series(const ValidateOptions& o) {
  return timed("mc_vs_series_mean", [&](std::ostream& d) {
    bool ok = true;
    for (double eps : {0.3, 0.5, 0.8}) {
      const SystemParams p = make_params(100, eps, 0.0);
      const auto est = mc_moments(p, mc_options(o, o.samples));
      const auto mc = perturbative_sideband(est, p, Side::blue);
      const auto se = series_sideband(p, Side::blue);
      const double rel = std::abs(mc.mean - se.mean) / std::abs(se.mean);
      d << "eps=" << eps << " rel=" << rel << "; ";
      ok = ok && rel < 5e-3;
    }
    return ok;
  });
}

CheckResult check_loose_variance(const ValidateOptions& o) {
  return timed("loose_variance_adjudication", [&](std::ostream& d) {
    const SystemParams p = make_params(200, 0.05, 0.0);
    const auto a = adjudicate_loose_variance(p, mc_options(o, o.samples));
    d << "MC Var(chi)=" << a.mc_variance.value << "+-" << a.mc_variance.std_error << " series(1/16 form)="
      << a.series_value << " loose(1/8)=" << a.loose_value << " winner=" << a.winner;
    return a.series_matches != a.loose_matches;
  });
}

CheckResult check_exact_vs_perturbative(const ValidateOptions& o) {
  return timed("exact_vs_perturbative", [&](std::ostream& d) {
    const SystemParams p = make_params(2, 0.5, 0.01);
    const MotionalBasis basis = make_basis(p, Backend::fock);
    const auto [red, blue] = split_sidebands(stick_spectrum(assemble(p, basis), initial_state(p, basis)));
    const auto pert = perturbative_sideband(mc_moments(p, mc_options(o, o.samples)), p, Side::red);
    const double diff = std::abs(red.mean - pert.mean);
    d << "spectrum red mean=" << red.mean << " perturbative=" << pert.mean << " diff=" << diff;
    return !red.empty && diff < 0.05;
  });
}

CheckResult check_sideband_asymmetry() {
  return timed("red_blue_asymmetry", [](std::ostream& d) {
    bool ok = true;
    for (double eps : {0.1, 0.5, 0.9}) {
      for (int n : {1, 10, 100}) {
        const SystemParams p = make_params(n, eps, 0.01);
        ok = ok && series_sideband(p, Side::blue).variance >= series_sideband(p, Side::red).variance;
      }
    }
    d << "series variance(blue) >= variance(red) for r > 0";
    return ok;
  });
}

CheckResult check_determinism(const ValidateOptions& o) {
  return timed("determinism", [&](std::ostream& d) {
    const SystemParams p = make_params(5, 0.5, 0.0);
    MonteCarloOptions a = mc_options(o, 20'000);
    MonteCarloOptions b = a;
    a.threads = 1;
    b.threads = 4;
    const auto x = mc_moments(p, a);
    const auto y = mc_moments(p, b);
    bool same = x.n_clipped == y.n_clipped && x.batch_sums.size() == y.batch_sums.size();
    for (std::size_t k = 0; same && k < x.batch_sums.size(); ++k) {
      same = std::memcmp(x.batch_sums[k].data(), y.batch_sums[k].data(), sizeof(double) * kMomentCount) == 0;
    }
    same = same && std::memcmp(&x.e_zeta_winsorized.value, &y.e_zeta_winsorized.value, sizeof(double)) == 0;
    d << (same ? "1 and 4 threads bitwise identical" : "thread count changed the estimates");
    return same;
  });
}

CheckResult check_counting_endpoints() {
  return timed("counting_endpoints", [](std::ostream& d) {
    const double tight = n_max(1.0 - 1e-9, 0.1).value;
    const double loose = n_max(1e-9, 0.1).value;
    const double loose_expect = 1.0 / (0.5 + 0.08);
    d << "tight=" << tight << " loose=" << loose << " (expect 25, " << loose_expect << ")";
    return std::abs(tight - 25.0) <= 0.025 && std::abs(loose - loose_expect) <= 1e-3 * loose_expect;
  });
}

CheckResult check_figure3() {
  return timed("figure3", [](std::ostream& d) {
    SystemParams base;
    base.n_atoms = 8;
    base.recoil_ratio = 0.01;
    const Fig3Table t = figure3_sweep(base, {8, 9}, linspace(0.01, 1.0, 100));
    bool ok = t.rows.size() == 100 && t.crossover.has_value();
    for (const auto& r : t.rows) {
      if (r.epsilon >= 0.95 && r.overlap) ok = false;
      if (r.epsilon <= 0.2 && !r.overlap) ok = false;
    }
    d << "crossover eps*=" << (t.crossover ? *t.crossover : std::nan(""));
    return ok;
  });
}

CheckResult check_figure4() {
  return timed("figure4", [](std::ostream& d) {
    const std::vector<double> kappas = {0.0, 0.02, 0.05, 0.1, 0.2};
    const Fig4Table t = figure4_sweep(kappas, linspace(0.01, 0.99, 99));
    double worst = 0.0;
    for (std::size_t r = 0; r < t.epsilons.size(); ++r) {
      const double om = 1.0 - t.epsilons[r];
      const double expect = 2.0 / (om * om);
      worst = std::max(worst, std::abs(t.n_max[r][0] - expect) / expect);
    }
    bool mono = true;
    for (bool m : t.monotone) mono = mono && m;
    d << "kappa=0 column max rel deviation from 2/(1-eps)^2=" << worst << (mono ? "; monotone" : "; not monotone");
    return worst < 1e-13 && mono;
  });
}

std::vector<CheckResult> run_validation(const ValidateOptions& options) {
  std::vector<CheckResult> out;
  out.push_back(check_sum_rules(cos_matrix_fock));
  out.push_back(check_tavis_cummings());
  out.push_back(check_lanczos_vs_dense());
  out.push_back(check_fock_vs_grid());
  out.push_back(check_series_limits());
  out.push_back(check_sideband_asymmetry());
  out.push_back(check_mc_vs_series(options));
  out.push_back(check_loose_variance(options));
  out.push_back(check_exact_vs_perturbative(options));
  out.push_back(check_determinism(options));
  out.push_back(check_counting_endpoints());
  out.push_back(check_figure3());
  out.push_back(check_figure4());
  return out;
}

}  // namespace cavity
