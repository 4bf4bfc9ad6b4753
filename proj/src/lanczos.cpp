#include "cavity/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace cavity {

LanczosResult lanczos_tridiagonalize(const SparseMatrix& h, const Eigen::VectorXd& seed, int max_iterations,
                                     const LanczosOptions& options) {
  const Eigen::Index dim = h.rows();
  if (seed.size() != dim) throw std::invalid_argument("seed length does not match operator dimension");
  if (std::abs(seed.norm() - 1.0) > 1e-10) throw std::invalid_argument("seed must have unit norm");
  if (max_iterations < 1) throw std::invalid_argument("need at least one Lanczos iteration");
  const Eigen::Index k_max = std::min<Eigen::Index>(max_iterations, dim);

  if (options.full_reorthogonalization &&
      static_cast<double>(k_max) * static_cast<double>(dim) * sizeof(double) > options.max_basis_bytes) {
    throw BudgetExceeded("Krylov basis of " + std::to_string(k_max) + " x " + std::to_string(dim) +
                         " vectors exceeds the memory budget");
  }

  LanczosResult out;
  out.alpha.reserve(k_max);
  out.beta.reserve(k_max);

  Eigen::MatrixXd basis;
  if (options.full_reorthogonalization) basis.resize(dim, k_max);

  Eigen::VectorXd q = seed;
  Eigen::VectorXd q_prev = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd w(dim);
  double beta_prev = 0.0;
  double h_norm = 0.0;

  for (Eigen::Index j = 0; j < k_max; ++j) {
    if (options.full_reorthogonalization) basis.col(j) = q;
    w.noalias() = h * q;
    const double a = q.dot(w);
    out.alpha.push_back(a);
    w -= a * q;
    if (j > 0) w -= beta_prev * q_prev;
    if (options.full_reorthogonalization) {
      const auto v = basis.leftCols(j + 1);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = v.transpose() * w;
        w.noalias() -= v * coeff;
      }
    }
    const double b = w.norm();
    h_norm = std::max({h_norm, std::abs(a), b, beta_prev});
    out.last_residual = b;
    if (j + 1 == k_max) {
      out.exhausted = k_max == dim || b <= options.breakdown_tol * std::max(1.0, h_norm);
      break;
    }
    if (b <= options.breakdown_tol * std::max(1.0, h_norm)) {
      out.exhausted = true;
      break;
    }
    out.beta.push_back(b);
    q_prev = q;
    q = w / b;
    beta_prev = b;
  }
  return out;
}

RitzPairs ritz_pairs(const LanczosResult& result) {
  const auto k = static_cast<Eigen::Index>(result.alpha.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(result.alpha.data(), k);
  Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index i = 0; i + 1 < k; ++i) sub(i) = result.beta[i];

  RitzPairs out;
  if (k == 1) {
    out.values = diag;
    out.weights = Eigen::VectorXd::Ones(1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver did not converge");
  out.values = solver.eigenvalues();
  out.weights = solver.eigenvectors().row(0).transpose().array().square();
  return out;
}

}  // namespace cavity
