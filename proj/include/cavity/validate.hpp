#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cavity {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  int threads = 0;
  long long samples = 1'000'000;
};

/// Single-atom cos-matrix provider, replaceable for fault injection.
using CosMatrixFn = std::function<Eigen::MatrixXd(double eta, int dim)>;

/// Weight, mean, variance and frozen-motion fourth-moment sum rules on N in {1,2}, epsilon in {0.2,0.5,0.9}.
CheckResult check_sum_rules(const CosMatrixFn& cos_matrix);
/// Two dominant lines at +-sqrt(N) for N in {1,2,3} near the tight limit.
CheckResult check_tavis_cummings();
CheckResult check_lanczos_vs_dense();
CheckResult check_fock_vs_grid();
/// Series against the tight-trap expansion near epsilon = 1.
CheckResult check_series_limits();
CheckResult check_mc_vs_series(const ValidateOptions& options);
/// Names the loose-trap variance prefactor supported by Monte Carlo.
CheckResult check_loose_variance(const ValidateOptions& options);
CheckResult check_exact_vs_perturbative(const ValidateOptions& options);
CheckResult check_sideband_asymmetry();
CheckResult check_determinism(const ValidateOptions& options);
CheckResult check_counting_endpoints();
CheckResult check_figure3();
CheckResult check_figure4();

/// Runs every check in a fixed order.
std::vector<CheckResult> run_validation(const ValidateOptions& options);

}  // namespace cavity
