#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavity/params.hpp"

namespace cavity {

enum class Backend { fock, grid };

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view name);

/// Operator size exceeds the configured nonzero budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// @brief Truncated motional basis of the single-excitation manifold.
///
/// State index = s * D + m, where s in {0..N} labels the internal state
/// (0: photon in cavity, i: atom i excited) and m = sum_i n_i d^(i-1) the
/// motional product state with atom 1 varying fastest.
struct MotionalBasis {
  Backend backend = Backend::fock;
  int n_atoms = 1;
  int per_atom_dim = 2;
  std::size_t motional_dim = 0;  ///< d^N
  std::size_t total_dim = 0;     ///< (N+1) d^N
  std::vector<double> grid;      ///< grid backend sample points in u
  double grid_spacing = 0.0;
};

/// Basis matching the resolution fields of params for the chosen backend.
MotionalBasis make_basis(const SystemParams& params, Backend backend);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// @brief Real symmetric Hamiltonian restricted to the n_T = 1 manifold, units of g.
struct ManifoldOperator {
  MotionalBasis basis;
  SparseMatrix matrix;
  double zero_point_energy = 0.0;  ///< E_0 used as the frequency origin

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct AssembleOptions {
  std::size_t max_nonzeros = 5'000'000;
};

/// @brief Matrix of cos(eta (a + a^dagger)) in the harmonic-oscillator basis.
///
/// Uses <m|exp(i eta (a+a^dagger))|n> = e^{-eta^2/2} sqrt(n!/m!) (i eta)^{m-n} L_n^{(m-n)}(eta^2)
/// evaluated with a log-domain prefactor and the Laguerre three-term recurrence.
/// Only even m-n survive, carrying the sign (-1)^{(m-n)/2}.
Eigen::MatrixXd cos_matrix_fock(double eta, int dim);

/// Largest dimension accepted by cos_matrix_fock.
inline constexpr int kMaxFockDim = 400;

/// Smallest per-atom dimension whose neglected cos|0> tail has norm below tol.
int suggested_fock_dim(double eta, double tol = 1e-8);

/// Estimated nonzeros of the assembled operator, checked against the budget.
std::size_t estimate_nonzeros(const MotionalBasis& basis);

ManifoldOperator assemble(const SystemParams& params, const MotionalBasis& basis,
                          const AssembleOptions& options = {});

/// Fock-backend assembly with a caller-supplied single-atom cos matrix.
ManifoldOperator assemble_fock(const SystemParams& params, const MotionalBasis& basis,
                               const Eigen::MatrixXd& cos_matrix, const AssembleOptions& options = {});

/// Psi_I = a^dagger |Psi_0>: motional ground state with the photon in the cavity.
Eigen::VectorXd initial_state(const SystemParams& params, const MotionalBasis& basis);

/// Sinc-DVR (Colbert-Miller) matrix of -d^2/du^2 on a uniform grid.
Eigen::MatrixXd sinc_dvr_kinetic(int points, double spacing);

/// @brief Binary operator dump.
///
/// Layout (little endian): 8-byte magic "CAVOP001", uint64 dim, uint64 nnz,
/// float64 zero_point_energy, then nnz records of (uint64 row, uint64 col, float64 value).
void write_operator_binary(const ManifoldOperator& op, std::ostream& out);

/// Reads a dump written by write_operator_binary; the basis is left default.
ManifoldOperator read_operator_binary(std::istream& in);

}  // namespace cavity
