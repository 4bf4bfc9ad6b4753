#include "cavity/geometry.hpp"

#include <cmath>

namespace cavity {

double chi_squared(AtomPositions u) {
  double s = 0.0;
  for (double ui : u) {
    const double c = std::cos(ui);
    s += c * c;
  }
  return s;
}

double chi(AtomPositions u) { return std::sqrt(chi_squared(u)); }

ChiZeta chi_zeta(AtomPositions u, double cutoff) {
  double s2 = 0.0;
  double s4 = 0.0;
  for (double ui : u) {
    const double c = std::cos(ui);
    const double c2 = c * c;
    s2 += c2;
    s4 += c2 * c2;
  }
  if (s2 < cutoff) throw NodeSingularityError(s2);
  const double n_minus_1 = static_cast<double>(u.size()) - 1.0;
  // For a single atom s4 == s2*s2 bitwise, so zeta is exactly zero.
  const double z = (-n_minus_1 / s2 + 1.0) - s4 / (s2 * s2);
  return {s2, z};
}

double zeta(AtomPositions u, double cutoff) { return chi_zeta(u, cutoff).zeta; }

BrightPair bright_pair(AtomPositions u, double cutoff) {
  const double x2 = chi_squared(u);
  if (x2 < cutoff) throw NodeSingularityError(x2);
  const double x = std::sqrt(x2);
  const std::size_t n = u.size();
  const double h = 1.0 / std::sqrt(2.0);

  BrightPair bp;
  bp.chi = x;
  bp.dark_dim = static_cast<int>(n) - 1;
  bp.plus_vector.assign(n + 1, 0.0);
  bp.minus_vector.assign(n + 1, 0.0);
  bp.plus_vector[0] = h;
  bp.minus_vector[0] = h;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = h * std::cos(u[i]) / x;
    bp.plus_vector[i + 1] = a;
    bp.minus_vector[i + 1] = -a;
  }
  return bp;
}

std::vector<double> coupling_matrix(AtomPositions u) {
  const std::size_t dim = u.size() + 1;
  std::vector<double> v(dim * dim, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double c = std::cos(u[i]);
    v[i + 1] = c;          // row 0, column i+1
    v[(i + 1) * dim] = c;  // row i+1, column 0
  }
  return v;
}

StickSpectrum tavis_cummings_sticks(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  const double split = std::sqrt(static_cast<double>(n_atoms));
  return {{{-split, 0.5}, {split, 0.5}}, SpectrumOrigin::tavis_cummings};
}

}  // namespace cavity
