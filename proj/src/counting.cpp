#include "cavity/counting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavity {

namespace {

SystemParams with_atoms(SystemParams p, int n) {
  p.n_atoms = n;
  return p;
}

SystemParams with_epsilon(SystemParams p, double eps) {
  p.eta = eta_from_epsilon(eps);
  p.epsilon = epsilon_from_eta(p.eta);
  return p;
}

// Positive when the two half-width bands are separated.
double band_gap(const SystemParams& base, int n_low, int n_high, double eps) {
  const SystemParams p = with_epsilon(base, eps);
  const auto lo = series_sideband(with_atoms(p, n_low), Side::red);
  const auto hi = series_sideband(with_atoms(p, n_high), Side::red);
  const double hw_lo = 0.5 * std::sqrt(std::max(lo.variance, 0.0));
  const double hw_hi = 0.5 * std::sqrt(std::max(hi.variance, 0.0));
  return std::abs(lo.mean - hi.mean) - (hw_lo + hw_hi);
}

}  // namespace

std::string_view to_string(CountingRegime regime) {
  switch (regime) {
    case CountingRegime::extrinsic: return "extrinsic";
    case CountingRegime::intrinsic: return "intrinsic";
    case CountingRegime::boundary: return "boundary";
    case CountingRegime::unbounded: return "unbounded";
  }
  return "unknown";
}

Separation separation(int n, const SystemParams& params) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double eps = params.epsilon;
  Separation s;
  s.asymptotic = std::sqrt((1.0 + eps) / (8.0 * n));
  s.exact = series_sideband(with_atoms(params, n), Side::red).mean -
            series_sideband(with_atoms(params, n + 1), Side::red).mean;
  return s;
}

NMax n_max(double epsilon, double kappa_over_g) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (!(kappa_over_g >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  const double om = 1.0 - epsilon;
  const double k2 = kappa_over_g * kappa_over_g;
  NMax out;
  const double denom = 8.0 * k2 + 0.5 * om * om * (1.0 + epsilon);
  if (denom == 0.0) {
    out.value = std::numeric_limits<double>::infinity();
    out.unbounded = true;
    out.regime = CountingRegime::unbounded;
    return out;
  }
  out.value = (1.0 + epsilon) / denom;
  const double ext = 16.0 * k2;
  const double intr = om * om;
  out.regime = ext > intr ? CountingRegime::extrinsic : ext < intr ? CountingRegime::intrinsic : CountingRegime::boundary;
  return out;
}

CountingReport make_report(int n, double mean_n, double mean_n_plus_1, double variance_n, double kappa,
                           double width_multiplier, SummaryMethod method) {
  if (!(width_multiplier > 0.0)) throw std::invalid_argument("width multiplier must be > 0");
  CountingReport r;
  r.n_atoms = n;
  r.method = method;
  r.width_multiplier = width_multiplier;
  r.separation = std::abs(mean_n - mean_n_plus_1);
  r.intrinsic_width = width_multiplier * std::sqrt(std::max(variance_n, 0.0));
  r.extrinsic_width = width_multiplier * kappa;
  r.combined_width = std::hypot(r.intrinsic_width, r.extrinsic_width);
  r.distinguishable = r.separation > r.combined_width;
  return r;
}

CountingReport count_series(int n, const SystemParams& params, double width_multiplier) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto a = series_sideband(with_atoms(params, n), Side::red);
  const auto b = series_sideband(with_atoms(params, n + 1), Side::red);
  return make_report(n, a.mean, b.mean, a.variance, params.kappa_ext, width_multiplier, SummaryMethod::series);
}

CountingReport count_perturbative(int n, const SystemParams& params, const MonteCarloOptions& mc,
                                  double width_multiplier) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const SystemParams pa = with_atoms(params, n);
  const SystemParams pb = with_atoms(params, n + 1);
  const auto a = perturbative_sideband(mc_moments(pa, mc), pa, Side::red);
  const auto b = perturbative_sideband(mc_moments(pb, mc), pb, Side::red);
  return make_report(n, a.mean, b.mean, a.variance, params.kappa_ext, width_multiplier,
                     SummaryMethod::perturbative_mc);
}

CountingReport count_spectrum(int n, const SystemParams& params, Backend backend, const SpectrumOptions& options,
                              double width_multiplier) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  auto red_of = [&](int atoms) {
    const SystemParams p = with_atoms(params, atoms);
    const MotionalBasis basis = make_basis(p, backend);
    const ManifoldOperator op = assemble(p, basis);
    const auto [red, blue] = split_sidebands(stick_spectrum(op, initial_state(p, basis), options));
    if (red.empty) throw std::runtime_error("red sideband is empty");
    return red;
  };
  const SidebandSummary a = red_of(n);
  const SidebandSummary b = red_of(n + 1);
  return make_report(n, a.mean, b.mean, a.variance, params.kappa_ext, width_multiplier, SummaryMethod::spectrum);
}

Fig3Table figure3_sweep(const SystemParams& base, std::pair<int, int> n_pair, const std::vector<double>& epsilon_grid) {
  const auto [n_low, n_high] = n_pair;
  if (n_low < 1 || n_high < 1 || n_low == n_high) throw std::invalid_argument("need two distinct atom numbers >= 1");
  Fig3Table t;
  t.n_low = n_low;
  t.n_high = n_high;
  t.recoil_ratio = base.recoil_ratio;
  for (double eps : epsilon_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon grid must lie in (0, 1]");
    const SystemParams p = with_epsilon(base, eps);
    const auto lo = series_sideband(with_atoms(p, n_low), Side::red);
    const auto hi = series_sideband(with_atoms(p, n_high), Side::red);
    Fig3Row row;
    row.epsilon = eps;
    row.mean_low = lo.mean;
    row.halfwidth_low = 0.5 * std::sqrt(std::max(lo.variance, 0.0));
    row.mean_high = hi.mean;
    row.halfwidth_high = 0.5 * std::sqrt(std::max(hi.variance, 0.0));
    row.overlap = std::abs(row.mean_low - row.mean_high) <= row.halfwidth_low + row.halfwidth_high;
    t.rows.push_back(row);
  }

  // Bisect the largest-epsilon bracket where the overlap flag changes.
  for (std::size_t k = t.rows.size(); k-- > 1;) {
    double a = t.rows[k - 1].epsilon;
    double b = t.rows[k].epsilon;
    double fa = band_gap(base, n_low, n_high, a);
    const double fb = band_gap(base, n_low, n_high, b);
    if ((fa > 0.0) == (fb > 0.0)) continue;
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-14; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = band_gap(base, n_low, n_high, mid);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    t.crossover = 0.5 * (a + b);
    break;
  }
  return t;
}

Fig4Table figure4_sweep(const std::vector<double>& kappas, const std::vector<double>& epsilon_grid) {
  Fig4Table t;
  t.kappas = kappas;
  t.epsilons = epsilon_grid;
  for (double eps : epsilon_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon grid must lie in (0, 1]");
    std::vector<double> row;
    for (double k : kappas) row.push_back(n_max(eps, k).value);
    t.n_max.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < kappas.size(); ++c) {
    bool mono = true;
    for (std::size_t r = 1; r < t.n_max.size(); ++r) {
      const bool ascending = t.epsilons[r] >= t.epsilons[r - 1];
      const double prev = t.n_max[r - 1][c];
      const double cur = t.n_max[r][c];
      if (ascending ? cur < prev : cur > prev) mono = false;
    }
    t.monotone.push_back(mono);
  }
  return t;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> v(points);
  for (int k = 0; k < points; ++k) v[k] = lo + (hi - lo) * k / (points - 1);
  v.back() = hi;
  return v;
}

}  // namespace cavity
