#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "cavity/spectrum_types.hpp"

namespace cavity {

/// Default chi^2 threshold below which a configuration counts as sitting on nodes.
inline constexpr double kNodeCutoff = 1e-12;

/// Raised when chi^2 falls below the node cutoff and 1/chi would blow up.
class NodeSingularityError : public std::domain_error {
 public:
  explicit NodeSingularityError(double chi2)
      : std::domain_error("all atoms at cavity nodes (chi^2 below cutoff)"), chi2_(chi2) {}
  double chi2() const noexcept { return chi2_; }

 private:
  double chi2_;
};

/// Scaled atom coordinates u_i = k x_i.
using AtomPositions = std::span<const double>;

/// @brief Bright eigenpair of the fixed-position coupling matrix V(x).
///
/// Vectors live in the internal basis {|0>, |1>, ..., |N>}: |0> has the
/// photon in the cavity, |i> has atom i excited.
struct BrightPair {
  double chi = 0.0;
  std::vector<double> plus_vector;
  std::vector<double> minus_vector;
  int dark_dim = 0;
};

/// sum_i cos^2 u_i
double chi_squared(AtomPositions u);

/// Collective coupling sqrt(sum_i cos^2 u_i), in [0, sqrt(N)].
double chi(AtomPositions u);

/// Nonadiabatic correction functional
///   zeta = -(N-1)/chi^2 + 1 - sum_i cos^4 u_i / chi^4.
/// Throws NodeSingularityError when chi^2 < cutoff.
double zeta(AtomPositions u, double cutoff = kNodeCutoff);

/// Both chi^2 and zeta from a single pass over the cosines.
struct ChiZeta {
  double chi2;
  double zeta;
};
ChiZeta chi_zeta(AtomPositions u, double cutoff = kNodeCutoff);

/// Closed-form bright states |D+-> = (|0> +- sum_i cos u_i / chi |i>) / sqrt(2).
BrightPair bright_pair(AtomPositions u, double cutoff = kNodeCutoff);

/// Dense (N+1)x(N+1) coupling matrix V(x) in units of g, row-major.
std::vector<double> coupling_matrix(AtomPositions u);

/// Fixed-atom (Tavis-Cummings) spectrum: lines at -sqrt(N) and +sqrt(N), weight 1/2 each.
StickSpectrum tavis_cummings_sticks(int n_atoms);

}  // namespace cavity
