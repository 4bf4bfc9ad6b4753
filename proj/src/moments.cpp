#include "cavity/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "cavity/geometry.hpp"

namespace cavity {

namespace {

struct BatchResult {
  std::array<double, kMomentCount> sums{};
  long long count = 0;
  long long clipped = 0;
  std::vector<double> zetas;  // unclipped samples, in draw order
};

BatchResult run_batch(int n_atoms, double eta, double cutoff, std::uint64_t seed, int batch, long long count) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, eta);

  BatchResult out;
  out.count = count;
  out.zetas.reserve(static_cast<std::size_t>(count));
  std::vector<double> u(n_atoms);
  for (long long s = 0; s < count; ++s) {
    for (auto& ui : u) ui = gauss(rng);
    // cutoff 0 never throws; clipping is applied below
    const auto [s2, z] = chi_zeta(u, 0.0);
    const double x = std::sqrt(s2);
    out.sums[kChi] += x;
    out.sums[kChi2] += s2;
    if (s2 < cutoff) {
      ++out.clipped;
      continue;
    }
    out.sums[kZeta] += z;
    out.sums[kZetaChi] += z * x;
    out.sums[kZetaChi2] += z * s2;
    out.zetas.push_back(z);
  }
  return out;
}

Estimate batch_mean_estimate(const std::vector<double>& batch_means, double overall) {
  const auto b = static_cast<double>(batch_means.size());
  double ss = 0.0;
  for (double m : batch_means) ss += (m - overall) * (m - overall);
  return {overall, std::sqrt(ss / (b - 1.0) / b)};
}

using Means = std::array<double, kMomentCount>;

// Delete-one-batch jackknife of a function of the five sample means.
Estimate jackknife(const MomentEstimates& est, const std::function<double(const Means&)>& f) {
  const std::size_t nb = est.batch_sums.size();
  Means total{};
  for (const auto& s : est.batch_sums) {
    for (int k = 0; k < kMomentCount; ++k) total[k] += s[k];
  }
  Means full{};
  for (int k = 0; k < kMomentCount; ++k) full[k] = total[k] / static_cast<double>(est.n_samples);
  const double value = f(full);
  if (nb < 2) return {value, 0.0};

  std::vector<double> loo(nb);
  double mean_loo = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    Means m{};
    const double n = static_cast<double>(est.n_samples - est.batch_counts[b]);
    for (int k = 0; k < kMomentCount; ++k) m[k] = (total[k] - est.batch_sums[b][k]) / n;
    loo[b] = f(m);
    mean_loo += loo[b];
  }
  mean_loo /= static_cast<double>(nb);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
  return {value, std::sqrt(ss * (static_cast<double>(nb) - 1.0) / static_cast<double>(nb))};
}

}  // namespace

std::string_view to_string(PredictionMethod method) {
  switch (method) {
    case PredictionMethod::perturbative_mc: return "perturbative_mc";
    case PredictionMethod::series_1_over_N: return "series_1_over_N";
    case PredictionMethod::tight_limit: return "tight_limit";
    case PredictionMethod::loose_limit: return "loose_limit";
  }
  return "unknown";
}

Estimate MomentEstimates::var_chi() const {
  return jackknife(*this, [](const Means& m) { return m[kChi2] - m[kChi] * m[kChi]; });
}

MomentEstimates mc_moments(const SystemParams& params, const MonteCarloOptions& options) {
  validate(params);
  if (!(params.eta > 0.0)) throw std::domain_error("Monte Carlo moments need eta > 0");
  if (options.n_samples < 1000) throw std::invalid_argument("n_samples must be >= 1000");
  if (options.batches < 2 || options.batches > options.n_samples) throw std::invalid_argument("invalid batch count");
  if (options.cutoff == 0.0) throw std::invalid_argument("chi^2 cutoff must be positive");
  if (!(options.winsor_fraction >= 0.0 && options.winsor_fraction < 0.5)) {
    throw std::invalid_argument("winsor fraction must lie in [0, 0.5)");
  }

  const int n = params.n_atoms;
  const double cutoff = options.cutoff < 0.0 ? 1e-6 * n : options.cutoff;
  const int nb = options.batches;
  const long long base = options.n_samples / nb;
  const long long extra = options.n_samples % nb;

  std::vector<BatchResult> results(nb);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next++; b < nb; b = next++) {
      const long long count = base + (b < extra ? 1 : 0);
      results[b] = run_batch(n, params.eta, cutoff, options.seed, b, count);
    }
  };
  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, nb);
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  MomentEstimates est;
  est.n_samples = options.n_samples;
  est.cutoff = cutoff;
  est.n_atoms = n;
  est.eta = params.eta;
  est.seed = options.seed;
  Means total{};
  for (const auto& r : results) {
    est.batch_sums.push_back(r.sums);
    est.batch_counts.push_back(r.count);
    est.n_clipped += r.clipped;
    for (int k = 0; k < kMomentCount; ++k) total[k] += r.sums[k];
  }
  if (est.n_clipped == est.n_samples) throw std::runtime_error("every Monte Carlo sample fell below the chi^2 cutoff");

  const double nt = static_cast<double>(est.n_samples);
  std::array<Estimate*, kMomentCount> slots = {&est.e_chi, &est.e_chi2, &est.e_zeta, &est.e_zeta_chi,
                                               &est.e_zeta_chi2};
  for (int k = 0; k < kMomentCount; ++k) {
    std::vector<double> means(nb);
    for (int b = 0; b < nb; ++b) means[b] = results[b].sums[k] / static_cast<double>(results[b].count);
    *slots[k] = batch_mean_estimate(means, total[k] / nt);
  }

  // Winsorized <zeta>: clamp to the pooled [f, 1-f] quantiles of the unclipped values.
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(est.n_samples - est.n_clipped));
  for (const auto& r : results) pooled.insert(pooled.end(), r.zetas.begin(), r.zetas.end());
  const auto quantile = [&pooled](double q) {
    auto k = static_cast<std::size_t>(q * static_cast<double>(pooled.size() - 1));
    std::nth_element(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(k), pooled.end());
    return pooled[k];
  };
  const double lo = quantile(options.winsor_fraction);
  const double hi = quantile(1.0 - options.winsor_fraction);
  std::vector<double> wmeans(nb);
  double wtotal = 0.0;
  for (int b = 0; b < nb; ++b) {
    double s = 0.0;
    for (double z : results[b].zetas) s += std::clamp(z, lo, hi);
    wtotal += s;
    wmeans[b] = s / static_cast<double>(results[b].count);
  }
  est.e_zeta_winsorized = batch_mean_estimate(wmeans, wtotal / nt);
  return est;
}

SidebandPrediction perturbative_sideband(const MomentEstimates& est, const SystemParams& params, Side side) {
  if (est.n_atoms != params.n_atoms || est.eta != params.eta) {
    throw std::invalid_argument("moment estimates were computed for different parameters");
  }
  if (est.e_chi.value <= 3.0 * est.e_chi.std_error) {
    throw std::runtime_error("<chi> is statistically consistent with zero; sidebands are not separated");
  }
  const double r = params.recoil_ratio;
  const double sgn = side == Side::blue ? 1.0 : -1.0;

  auto mean_f = [r, sgn](const Means& m) {
    return sgn * m[kChi] + 0.5 * r * m[kZeta] + 0.5 * r * (m[kZeta] * m[kChi] - m[kZetaChi]) / m[kChi];
  };
  auto var_f = [r, sgn](const Means& m) {
    const double width = m[kChi2] - m[kChi] * m[kChi];
    const double recoil = (m[kZetaChi2] + m[kZeta] * m[kChi2]) / m[kChi] - 2.0 * m[kZeta] * m[kChi];
    return width + sgn * r * recoil;
  };

  const Estimate mean = jackknife(est, mean_f);
  const Estimate var = jackknife(est, var_f);
  SidebandPrediction p;
  p.side = side;
  p.method = PredictionMethod::perturbative_mc;
  p.mean = mean.value;
  p.mean_error = mean.std_error;
  p.variance = var.value;
  p.variance_error = var.std_error;
  return p;
}

SidebandPrediction series_sideband(const SystemParams& params, Side side) {
  const double n = params.n_atoms;
  const double eps = params.epsilon;
  const double r = params.recoil_ratio;
  const double sgn = side == Side::blue ? 1.0 : -1.0;
  const double om = 1.0 - eps;

  SidebandPrediction p;
  p.side = side;
  p.method = PredictionMethod::series_1_over_N;
  p.mean = sgn * std::sqrt(n) * std::sqrt((1.0 + eps) / 2.0) * (1.0 - om * om / (16.0 * n)) -
           r * om / (2.0 * (1.0 + eps));
  p.variance = om * om * (1.0 + eps) / 16.0 +
               sgn * r * om * om * (3.0 + eps) / (4.0 * std::sqrt(n) * std::sqrt(2.0 * (1.0 + eps)));
  return p;
}

SidebandPrediction tight_limit(const SystemParams& params, Side side) {
  const double n = params.n_atoms;
  const double r = params.recoil_ratio;
  const double sgn = side == Side::blue ? 1.0 : -1.0;
  const double ks2 = 2.0 * params.eta * params.eta;  // k^2 sigma^2

  SidebandPrediction p;
  p.side = side;
  p.method = PredictionMethod::tight_limit;
  p.mean = sgn * std::sqrt(n) * (1.0 - 0.25 * ks2) - 0.25 * r * ks2;
  p.variance = 0.125 * ks2 * ks2 + sgn * r * ks2 * ks2 / (2.0 * std::sqrt(n));
  p.in_validity_domain = ks2 <= 0.2;
  return p;
}

SidebandPrediction loose_limit(const SystemParams& params, Side side) {
  const double n = params.n_atoms;
  const double r = params.recoil_ratio;
  const double sgn = side == Side::blue ? 1.0 : -1.0;

  SidebandPrediction p;
  p.side = side;
  p.method = PredictionMethod::loose_limit;
  p.mean = sgn * std::sqrt(n / 2.0) * (1.0 - 1.0 / (16.0 * n)) + 0.5 * r;
  p.variance = 0.125 + sgn * r * 3.0 / (4.0 * std::sqrt(2.0 * n));
  p.in_validity_domain = params.epsilon <= 0.05;
  return p;
}

VarianceAdjudication adjudicate_loose_variance(const SystemParams& params, const MonteCarloOptions& options,
                                               double tolerance) {
  const MomentEstimates est = mc_moments(params, options);
  VarianceAdjudication a;
  a.mc_variance = est.var_chi();
  a.tolerance = tolerance;
  const double om = 1.0 - params.epsilon;
  a.series_value = om * om * (1.0 + params.epsilon) / 16.0;
  a.loose_value = 0.125;
  a.series_matches = std::abs(a.mc_variance.value - a.series_value) <= tolerance * a.series_value;
  a.loose_matches = std::abs(a.mc_variance.value - a.loose_value) <= tolerance * a.loose_value;
  if (a.series_matches && a.loose_matches) {
    a.winner = "both";
  } else if (a.series_matches) {
    a.winner = "series_1_over_16";
  } else if (a.loose_matches) {
    a.winner = "loose_1_over_8";
  } else {
    a.winner = "none";
  }
  return a;
}

}  // namespace cavity
