#include "cavity/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cavity/geometry.hpp"

namespace cavity {

std::string_view to_string(Side side) { return side == Side::red ? "red" : "blue"; }

std::string_view to_string(SpectrumOrigin origin) {
  switch (origin) {
    case SpectrumOrigin::exact_diag: return "exact_diag";
    case SpectrumOrigin::lanczos_seed: return "lanczos_seed";
    case SpectrumOrigin::tavis_cummings: return "tavis_cummings";
  }
  return "unknown";
}

std::string_view to_string(SummaryMethod method) {
  switch (method) {
    case SummaryMethod::spectrum: return "spectrum";
    case SummaryMethod::perturbative_mc: return "perturbative_mc";
    case SummaryMethod::series: return "series";
  }
  return "unknown";
}

double StickSpectrum::total_weight() const {
  double w = 0.0;
  for (const auto& l : lines) w += l.weight;
  return w;
}

StickSpectrum normalize_sticks(std::vector<StickLine> lines, SpectrumOrigin origin, double weight_cutoff,
                               double merge_tol) {
  std::sort(lines.begin(), lines.end(), [](const StickLine& a, const StickLine& b) { return a.omega < b.omega; });

  std::vector<StickLine> merged;
  merged.reserve(lines.size());
  std::size_t i = 0;
  while (i < lines.size()) {
    std::size_t j = i + 1;
    while (j < lines.size() && lines[j].omega - lines[j - 1].omega < merge_tol) ++j;
    double w = 0.0;
    double wo = 0.0;
    double plain = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      w += lines[k].weight;
      wo += lines[k].weight * lines[k].omega;
      plain += lines[k].omega;
    }
    merged.push_back({w > 0.0 ? wo / w : plain / static_cast<double>(j - i), w});
    i = j;
  }

  double total = 0.0;
  for (const auto& l : merged) total += l.weight;
  StickSpectrum out;
  out.origin = origin;
  for (const auto& l : merged) {
    if (l.weight >= weight_cutoff * total && l.weight > 0.0) out.lines.push_back(l);
  }
  return out;
}

StickSpectrum dense_stick_spectrum(const ManifoldOperator& op, const Eigen::VectorXd& psi_i,
                                   const SpectrumOptions& options) {
  if (static_cast<std::size_t>(psi_i.size()) != op.dim()) throw std::invalid_argument("state/operator dimension mismatch");
  if (op.dim() > options.dense_limit) {
    throw BudgetExceeded("dense diagonalization limited to dimension " + std::to_string(options.dense_limit));
  }
  const Eigen::MatrixXd h = Eigen::MatrixXd(op.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("dense eigensolver did not converge");
  }
  const Eigen::VectorXd overlaps = solver.eigenvectors().transpose() * psi_i;
  std::vector<StickLine> lines(static_cast<std::size_t>(overlaps.size()));
  for (Eigen::Index j = 0; j < overlaps.size(); ++j) {
    lines[j] = {solver.eigenvalues()(j) - op.zero_point_energy, overlaps(j) * overlaps(j)};
  }
  return normalize_sticks(std::move(lines), SpectrumOrigin::exact_diag, options.weight_cutoff, options.merge_tol);
}

StickSpectrum lanczos_spectrum(const ManifoldOperator& op, const Eigen::VectorXd& psi_i, int iterations,
                               const SpectrumOptions& options) {
  if (static_cast<std::size_t>(psi_i.size()) != op.dim()) throw std::invalid_argument("state/operator dimension mismatch");
  const LanczosResult tri = lanczos_tridiagonalize(op.matrix, psi_i, iterations, options.lanczos);
  const RitzPairs ritz = ritz_pairs(tri);
  std::vector<StickLine> lines(static_cast<std::size_t>(ritz.values.size()));
  for (Eigen::Index j = 0; j < ritz.values.size(); ++j) {
    lines[j] = {ritz.values(j) - op.zero_point_energy, ritz.weights(j)};
  }
  return normalize_sticks(std::move(lines), SpectrumOrigin::lanczos_seed, options.weight_cutoff, options.merge_tol);
}

StickSpectrum stick_spectrum(const ManifoldOperator& op, const Eigen::VectorXd& psi_i, const SpectrumOptions& options) {
  if (op.dim() <= options.dense_limit) return dense_stick_spectrum(op, psi_i, options);
  return lanczos_spectrum(op, psi_i, static_cast<int>(std::min<std::size_t>(op.dim(), 1'000'000'000)), options);
}

std::pair<SidebandSummary, SidebandSummary> split_sidebands(const StickSpectrum& s) {
  auto summarize = [&s](Side side) {
    SidebandSummary out;
    out.side = side;
    out.method = SummaryMethod::spectrum;
    double w = 0.0;
    double wo = 0.0;
    for (const auto& l : s.lines) {
      const bool on_side = side == Side::red ? l.omega < 0.0 : l.omega > 0.0;
      if (!on_side || l.weight <= 0.0) continue;
      w += l.weight;
      wo += l.weight * l.omega;
    }
    out.total_weight = w;
    if (w < kEmptySidebandWeight) return out;
    out.empty = false;
    out.mean = wo / w;
    double var = 0.0;
    for (const auto& l : s.lines) {
      const bool on_side = side == Side::red ? l.omega < 0.0 : l.omega > 0.0;
      if (!on_side || l.weight <= 0.0) continue;
      const double d = l.omega - out.mean;
      var += l.weight * d * d;
    }
    out.variance = var / w;
    return out;
  };
  return {summarize(Side::red), summarize(Side::blue)};
}

FrequencyGrid covering_grid(const StickSpectrum& s, double kappa, int points, double margin_widths) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  double lo = 0.0;
  double hi = 0.0;
  if (!s.lines.empty()) {
    lo = s.lines.front().omega;
    hi = s.lines.front().omega;
    for (const auto& l : s.lines) {
      lo = std::min(lo, l.omega);
      hi = std::max(hi, l.omega);
    }
  }
  return {lo - margin_widths * kappa, hi + margin_widths * kappa, points};
}

BroadenedSpectrum convolve(const StickSpectrum& s, double kappa, const FrequencyGrid& grid) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  if (grid.points < 2 || !(grid.max > grid.min)) throw std::invalid_argument("invalid frequency grid");

  BroadenedSpectrum out;
  out.kernel_width = kappa;
  out.omega.resize(grid.points);
  out.intensity.assign(grid.points, 0.0);
  const double step = (grid.max - grid.min) / (grid.points - 1);
  for (int k = 0; k < grid.points; ++k) out.omega[k] = grid.min + k * step;

  const double norm = kappa / std::numbers::pi;
  for (const auto& l : s.lines) {
    if (l.omega < grid.min || l.omega > grid.max) out.covers_all_lines = false;
    for (int k = 0; k < grid.points; ++k) {
      const double d = out.omega[k] - l.omega;
      out.intensity[k] += l.weight * norm / (d * d + kappa * kappa);
    }
  }
  return out;
}

double integrate(const BroadenedSpectrum& b) {
  double sum = 0.0;
  for (std::size_t k = 1; k < b.omega.size(); ++k) {
    sum += 0.5 * (b.intensity[k] + b.intensity[k - 1]) * (b.omega[k] - b.omega[k - 1]);
  }
  return sum;
}

namespace {

template <typename Pred>
MomentTable moment_table(const StickSpectrum& s, int order, Pred include) {
  MomentTable t;
  t.raw.assign(order + 1, 0.0);
  t.central.assign(order + 1, 0.0);
  for (const auto& l : s.lines) {
    if (!include(l)) continue;
    t.weight += l.weight;
    double p = 1.0;
    for (int k = 0; k <= order; ++k) {
      t.raw[k] += l.weight * p;
      p *= l.omega;
    }
  }
  if (t.weight <= 0.0) return t;
  for (auto& m : t.raw) m /= t.weight;
  const double mean = order >= 1 ? t.raw[1] : 0.0;
  for (const auto& l : s.lines) {
    if (!include(l)) continue;
    double p = 1.0;
    for (int k = 0; k <= order; ++k) {
      t.central[k] += l.weight * p;
      p *= l.omega - mean;
    }
  }
  for (auto& m : t.central) m /= t.weight;
  return t;
}

}  // namespace

SpectralMoments spectral_moments(const StickSpectrum& s, int order) {
  if (order < 0 || order > 4) throw std::invalid_argument("moment order must be in [0, 4]");
  SpectralMoments out;
  out.full = moment_table(s, order, [](const StickLine&) { return true; });
  out.red = moment_table(s, order, [](const StickLine& l) { return l.omega < 0.0; });
  out.blue = moment_table(s, order, [](const StickLine& l) { return l.omega > 0.0; });
  return out;
}

std::vector<ProjectedLine> projected_lines(const ManifoldOperator& op, const Eigen::VectorXd& psi_i, double min_weight,
                                           const SpectrumOptions& options) {
  const MotionalBasis& basis = op.basis;
  if (basis.backend != Backend::grid) throw std::invalid_argument("bright-state projections need the grid backend");
  if (op.dim() > options.dense_limit) {
    throw BudgetExceeded("projection diagnostics limited to dimension " + std::to_string(options.dense_limit));
  }
  if (static_cast<std::size_t>(psi_i.size()) != op.dim()) throw std::invalid_argument("state/operator dimension mismatch");

  const Eigen::MatrixXd h = Eigen::MatrixXd(op.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver did not converge");

  const int n = basis.n_atoms;
  const int d = basis.per_atom_dim;
  const std::size_t dm = basis.motional_dim;

  // cos u_i / chi at every motional grid point, row m holds the N atoms
  std::vector<double> dir(dm * n, 0.0);
  std::vector<char> bright(dm, 0);
  std::vector<int> digits(n, 0);
  for (std::size_t m = 0; m < dm; ++m) {
    double x2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = std::cos(basis.grid[digits[i]]);
      dir[m * n + i] = c;
      x2 += c * c;
    }
    if (x2 >= kNodeCutoff) {
      bright[m] = 1;
      const double x = std::sqrt(x2);
      for (int i = 0; i < n; ++i) dir[m * n + i] /= x;
    }
    for (auto& q : digits) {
      if (++q < d) break;
      q = 0;
    }
  }

  const Eigen::VectorXd overlaps = solver.eigenvectors().transpose() * psi_i;
  std::vector<ProjectedLine> out;
  const double h2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < overlaps.size(); ++j) {
    const double w = overlaps(j) * overlaps(j);
    if (w < min_weight) continue;
    const auto v = solver.eigenvectors().col(j);
    ProjectedLine pl;
    pl.omega = solver.eigenvalues()(j) - op.zero_point_energy;
    pl.weight = w;
    for (std::size_t m = 0; m < dm; ++m) {
      if (!bright[m]) continue;
      double excited = 0.0;
      for (int i = 0; i < n; ++i) excited += dir[m * n + i] * v((i + 1) * dm + m);
      const double a0 = v(static_cast<Eigen::Index>(m));
      const double plus = h2 * (a0 + excited);
      const double minus = h2 * (a0 - excited);
      pl.p_plus += plus * plus;
      pl.p_minus += minus * minus;
    }
    out.push_back(pl);
  }
  return out;
}

}  // namespace cavity
