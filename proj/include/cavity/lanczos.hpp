#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cavity/hamiltonian.hpp"

namespace cavity {

/// Tridiagonal coefficients of H in the Krylov basis of a seed vector.
struct LanczosResult {
  std::vector<double> alpha;  ///< diagonal, one per iteration
  std::vector<double> beta;   ///< off-diagonal, alpha.size() - 1 entries
  bool exhausted = false;     ///< Krylov space became invariant (beta below tolerance)
  double last_residual = 0.0; ///< norm of the final residual vector
};

struct LanczosOptions {
  bool full_reorthogonalization = true;
  double breakdown_tol = 1e-10;           ///< relative to the running norm estimate of H
  std::size_t max_basis_bytes = 1'500'000'000;
};

/// @brief Lanczos tridiagonalization seeded with `seed` (must have unit norm).
///
/// With full reorthogonalization (two passes of classical Gram-Schmidt) the
/// Ritz pairs of the returned tridiagonal reproduce the spectral measure of
/// the seed: its moments up to order 2k-1 are exact after k iterations.
LanczosResult lanczos_tridiagonalize(const SparseMatrix& h, const Eigen::VectorXd& seed, int max_iterations,
                                     const LanczosOptions& options = {});

/// Eigenvalues of the tridiagonal and squared first components of its eigenvectors.
struct RitzPairs {
  Eigen::VectorXd values;
  Eigen::VectorXd weights;
};
RitzPairs ritz_pairs(const LanczosResult& result);

}  // namespace cavity
