#include "cavity/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace cavity {

namespace {

std::size_t int_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / base) throw BudgetExceeded("basis dimension overflows");
    r *= base;
  }
  return r;
}

void check_budget(const MotionalBasis& basis, const AssembleOptions& options) {
  const std::size_t nnz = estimate_nonzeros(basis);
  if (nnz > options.max_nonzeros) {
    throw BudgetExceeded("operator needs ~" + std::to_string(nnz) + " nonzeros (budget " +
                         std::to_string(options.max_nonzeros) +
                         "); reduce the motional truncation or use the moments route for large N");
  }
}

// Walks the motional product index, keeping the per-atom digits in sync.
struct DigitCounter {
  std::vector<int> digits;
  int base;
  DigitCounter(int n, int b) : digits(n, 0), base(b) {}
  void advance() {
    for (auto& d : digits) {
      if (++d < base) return;
      d = 0;
    }
  }
};

}  // namespace

std::string_view to_string(Backend backend) { return backend == Backend::fock ? "fock" : "grid"; }

Backend backend_from_string(std::string_view name) {
  if (name == "fock") return Backend::fock;
  if (name == "grid") return Backend::grid;
  throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

Eigen::MatrixXd cos_matrix_fock(double eta, int dim) {
  if (dim < 2) throw std::invalid_argument("cos matrix dimension must be >= 2");
  if (dim > kMaxFockDim) throw std::invalid_argument("cos matrix dimension exceeds " + std::to_string(kMaxFockDim));
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  const double x = eta * eta;
  const double log_eta = eta > 0.0 ? std::log(eta) : -std::numeric_limits<double>::infinity();

  std::vector<double> lag(dim);
  for (int alpha = 0; alpha < dim; alpha += 2) {
    if (alpha > 0 && eta == 0.0) break;
    const int count = dim - alpha;
    // L_k^{(alpha)}(x), k = 0..count-1
    lag[0] = 1.0;
    if (count > 1) lag[1] = 1.0 + alpha - x;
    for (int k = 1; k + 1 < count; ++k) {
      lag[k + 1] = ((2.0 * k + 1.0 + alpha - x) * lag[k] - (k + alpha) * lag[k - 1]) / (k + 1.0);
    }
    const double sign = (alpha / 2) % 2 == 0 ? 1.0 : -1.0;
    for (int n = 0; n < count; ++n) {
      const int m = n + alpha;
      double log_pref = -0.5 * x + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
      if (alpha > 0) log_pref += alpha * log_eta;
      const double l = lag[n];
      const double value = l == 0.0 ? 0.0 : std::copysign(std::exp(log_pref + std::log(std::abs(l))), l);
      c(m, n) = sign * value;
      c(n, m) = sign * value;
    }
  }
  return c;
}

int suggested_fock_dim(double eta, double tol) {
  const double x = eta * eta;
  // Squared amplitudes of cos|0> on level m (even m): e^{-x} x^m / m!.
  auto term = [x](int m) { return std::exp(-x + m * std::log(x) - std::lgamma(m + 1.0)); };
  if (eta == 0.0) return 2;
  for (int d = 2; d <= kMaxFockDim; ++d) {
    double tail = 0.0;
    for (int m = d + (d % 2); m < d + 400; m += 2) tail += term(m);
    if (std::sqrt(tail) < tol) return d;
  }
  return kMaxFockDim;
}

Eigen::MatrixXd sinc_dvr_kinetic(int points, double spacing) {
  Eigen::MatrixXd t(points, points);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double scale = 1.0 / (spacing * spacing);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      if (i == j) {
        t(i, j) = scale * pi2 / 3.0;
      } else {
        const double d = i - j;
        t(i, j) = scale * ((i - j) % 2 == 0 ? 2.0 : -2.0) / (d * d);
      }
    }
  }
  return t;
}

namespace {

void check_grid(const SystemParams& params, const MotionalBasis& basis) {
  // Fraction of the ground-state density |phi_0|^2 (std eta in u) outside [-L, L].
  const double outside = std::erfc(params.grid_halfwidth / (params.eta * std::sqrt(2.0)));
  if (outside > 1e-8) {
    throw std::domain_error("grid box too small: ground-state mass outside box is " + std::to_string(outside));
  }
  if (basis.grid_spacing > params.eta) {
    throw std::domain_error("grid too coarse to resolve the ground state (spacing > eta)");
  }
}

}  // namespace

MotionalBasis make_basis(const SystemParams& params, Backend backend) {
  validate(params);
  if (params.eta <= 0.0) throw std::domain_error("numeric backends require eta > 0");
  MotionalBasis b;
  b.backend = backend;
  b.n_atoms = params.n_atoms;
  b.per_atom_dim = backend == Backend::fock ? params.n_max_fock : params.grid_points;
  b.motional_dim = int_pow(static_cast<std::size_t>(b.per_atom_dim), params.n_atoms);
  b.total_dim = b.motional_dim * static_cast<std::size_t>(params.n_atoms + 1);
  if (backend == Backend::grid) {
    const double l = params.grid_halfwidth;
    b.grid_spacing = 2.0 * l / b.per_atom_dim;
    b.grid.resize(b.per_atom_dim);
    for (int j = 0; j < b.per_atom_dim; ++j) b.grid[j] = -l + (j + 0.5) * b.grid_spacing;
    check_grid(params, b);
  }
  return b;
}

std::size_t estimate_nonzeros(const MotionalBasis& basis) {
  const std::size_t n = basis.n_atoms;
  const std::size_t d = basis.per_atom_dim;
  const std::size_t dm = basis.motional_dim;
  if (basis.backend == Backend::fock) {
    // cos connects levels of equal parity: about d/2 entries per row.
    const std::size_t per_row = (d + 1) / 2;
    return basis.total_dim + 2 * n * dm * per_row;
  }
  // kinetic is dense along each atom's axis; coupling is diagonal in position
  return basis.total_dim * (n * (d - 1) + 1) + 2 * n * dm;
}

ManifoldOperator assemble_fock(const SystemParams& params, const MotionalBasis& basis,
                               const Eigen::MatrixXd& cos_matrix, const AssembleOptions& options) {
  if (basis.backend != Backend::fock) throw std::invalid_argument("assemble_fock needs a Fock basis");
  if (params.eta <= 0.0) throw std::domain_error("numeric backends require eta > 0");
  const int d = basis.per_atom_dim;
  if (cos_matrix.rows() != d || cos_matrix.cols() != d) throw std::invalid_argument("cos matrix size mismatch");
  check_budget(basis, options);

  const int n = basis.n_atoms;
  const std::size_t dm = basis.motional_dim;
  const double omega0 = params.trap_frequency();

  std::vector<std::size_t> stride(n);
  for (int i = 0; i < n; ++i) stride[i] = int_pow(d, i);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(estimate_nonzeros(basis));

  DigitCounter idx(n, d);
  for (std::size_t m = 0; m < dm; ++m, idx.advance()) {
    double quanta = 0.0;
    for (int q : idx.digits) quanta += q;
    const double e_motion = omega0 * (quanta + 0.5 * n);
    for (int s = 0; s <= n; ++s) {
      const std::size_t row = s * dm + m;
      if (e_motion != 0.0) triplets.emplace_back(row, row, e_motion);
    }
    // <0, m| V |i, m'> with m' differing from m only in atom i
    for (int i = 0; i < n; ++i) {
      const int ni = idx.digits[i];
      const std::size_t base = m - ni * stride[i];
      for (int nj = ni % 2; nj < d; nj += 2) {
        const double c = cos_matrix(ni, nj);
        if (c == 0.0) continue;
        const std::size_t col = (i + 1) * dm + base + nj * stride[i];
        triplets.emplace_back(m, col, c);
        triplets.emplace_back(col, m, c);
      }
    }
  }

  ManifoldOperator op;
  op.basis = basis;
  op.zero_point_energy = params.zero_point_energy();
  op.matrix.resize(static_cast<Eigen::Index>(basis.total_dim), static_cast<Eigen::Index>(basis.total_dim));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

namespace {

ManifoldOperator assemble_grid(const SystemParams& params, const MotionalBasis& basis,
                               const AssembleOptions& options) {
  const double eta = params.eta;
  check_grid(params, basis);
  check_budget(basis, options);

  const int n = basis.n_atoms;
  const int d = basis.per_atom_dim;
  const std::size_t dm = basis.motional_dim;
  const double omega0 = params.trap_frequency();
  const double r = params.recoil_ratio;
  const double trap_coeff = omega0 / (4.0 * eta * eta);

  const Eigen::MatrixXd kin = r * sinc_dvr_kinetic(d, basis.grid_spacing);
  std::vector<double> cos_u(d);
  for (int j = 0; j < d; ++j) cos_u[j] = std::cos(basis.grid[j]);

  std::vector<std::size_t> stride(n);
  for (int i = 0; i < n; ++i) stride[i] = int_pow(d, i);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(estimate_nonzeros(basis));

  DigitCounter idx(n, d);
  for (std::size_t m = 0; m < dm; ++m, idx.advance()) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = basis.grid[idx.digits[i]];
      diag += trap_coeff * u * u;
    }
    for (int s = 0; s <= n; ++s) {
      const std::size_t off = s * dm;
      for (int i = 0; i < n; ++i) {
        const int ji = idx.digits[i];
        const std::size_t base = m - ji * stride[i];
        for (int jj = 0; jj < d; ++jj) {
          double v = kin(ji, jj);
          if (jj == ji) v += i == 0 ? diag : 0.0;
          if (r == 0.0 && jj != ji) continue;
          triplets.emplace_back(off + m, off + base + jj * stride[i], v);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      const double c = cos_u[idx.digits[i]];
      const std::size_t col = (i + 1) * dm + m;
      triplets.emplace_back(m, col, c);
      triplets.emplace_back(col, m, c);
    }
  }

  ManifoldOperator op;
  op.basis = basis;
  op.zero_point_energy = params.zero_point_energy();
  op.matrix.resize(static_cast<Eigen::Index>(basis.total_dim), static_cast<Eigen::Index>(basis.total_dim));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.prune(0.0);
  op.matrix.makeCompressed();
  return op;
}

}  // namespace

ManifoldOperator assemble(const SystemParams& params, const MotionalBasis& basis, const AssembleOptions& options) {
  if (params.eta <= 0.0) throw std::domain_error("numeric backends require eta > 0");
  if (basis.n_atoms != params.n_atoms) throw std::invalid_argument("basis built for a different atom number");
  if (basis.backend == Backend::fock) {
    check_budget(basis, options);
    return assemble_fock(params, basis, cos_matrix_fock(params.eta, basis.per_atom_dim), options);
  }
  return assemble_grid(params, basis, options);
}

Eigen::VectorXd initial_state(const SystemParams& params, const MotionalBasis& basis) {
  if (basis.n_atoms != params.n_atoms) throw std::invalid_argument("basis built for a different atom number");
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.total_dim));
  if (basis.backend == Backend::fock) {
    psi(0) = 1.0;
    return psi;
  }
  if (params.eta <= 0.0) throw std::domain_error("numeric backends require eta > 0");
  const int n = basis.n_atoms;
  const int d = basis.per_atom_dim;
  // Single-atom amplitude exp(-u^2 / (4 eta^2)) gives a density of standard deviation eta.
  Eigen::VectorXd phi(d);
  for (int j = 0; j < d; ++j) {
    const double u = basis.grid[j];
    phi(j) = std::exp(-u * u / (4.0 * params.eta * params.eta));
  }
  phi.normalize();
  DigitCounter idx(n, d);
  for (std::size_t m = 0; m < basis.motional_dim; ++m, idx.advance()) {
    double a = 1.0;
    for (int q : idx.digits) a *= phi(q);
    psi(static_cast<Eigen::Index>(m)) = a;
  }
  psi.normalize();
  return psi;
}

namespace {

constexpr char kMagic[8] = {'C', 'A', 'V', 'O', 'P', '0', '0', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated operator dump");
  return value;
}

}  // namespace

void write_operator_binary(const ManifoldOperator& op, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, op.dim());
  put<std::uint64_t>(out, static_cast<std::uint64_t>(op.matrix.nonZeros()));
  put<double>(out, op.zero_point_energy);
  for (Eigen::Index row = 0; row < op.matrix.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(op.matrix, row); it; ++it) {
      put<std::uint64_t>(out, static_cast<std::uint64_t>(it.row()));
      put<std::uint64_t>(out, static_cast<std::uint64_t>(it.col()));
      put<double>(out, it.value());
    }
  }
}

ManifoldOperator read_operator_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw std::runtime_error("not an operator dump");
  const auto dim = get<std::uint64_t>(in);
  const auto nnz = get<std::uint64_t>(in);
  ManifoldOperator op;
  op.zero_point_energy = get<double>(in);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(nnz);
  for (std::uint64_t k = 0; k < nnz; ++k) {
    const auto r = get<std::uint64_t>(in);
    const auto c = get<std::uint64_t>(in);
    const auto v = get<double>(in);
    if (r >= dim || c >= dim) throw std::runtime_error("operator dump index out of range");
    triplets.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c), v);
  }
  op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  op.basis.total_dim = dim;
  return op;
}

}  // namespace cavity
