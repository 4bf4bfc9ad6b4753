#include <doctest.h>

#include <cmath>

#include "cavity/hamiltonian.hpp"
#include "cavity/validate.hpp"

using namespace cavity;

namespace {

// Direct (non log-domain) Laguerre evaluation of <m|cos(eta(a+a^dagger))|n>.
// `skew` perturbs the three-term recurrence coefficient to emulate a coding error.
Eigen::MatrixXd cos_matrix_direct(double eta, int dim, double skew) {
  const double x = eta * eta;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = n; m < dim; m += 2) {
      const int a = m - n;
      double l_prev = 1.0, l = 1.0 + a - x;
      if (n == 0) l = 1.0;
      for (int k = 1; k < n; ++k) {
        const double next = ((2 * k + 1 + a - x) * l - (k + a + skew) * l_prev) / (k + 1);
        l_prev = l;
        l = next;
      }
      const double pref =
          std::exp(-x / 2 + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) + a * std::log(eta));
      const double v = ((a / 2) % 2 == 0 ? 1.0 : -1.0) * pref * l;
      c(m, n) = c(n, m) = v;
    }
  }
  return c;
}

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("direct Laguerre evaluation agrees with the library") {
  for (double eta : {0.3, 0.8}) {
    CHECK((cos_matrix_direct(eta, 25, 0.0) - cos_matrix_fock(eta, 25)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sum rules pass with the correct cos matrix") {
  const CheckResult r = check_sum_rules(cos_matrix_fock);
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("corrupted cos-matrix recurrence fails the sum rules") {
  const CheckResult r = check_sum_rules([](double eta, int dim) { return cos_matrix_direct(eta, dim, 0.01); });
  CHECK_FALSE(r.passed);
  CHECK(r.detail.find("fourth-moment") != std::string::npos);
}

TEST_CASE("fast invariant checks pass") {
  for (const CheckResult& r : {check_tavis_cummings(), check_lanczos_vs_dense(), check_fock_vs_grid(),
                               check_series_limits(), check_sideband_asymmetry(), check_counting_endpoints(),
                               check_figure3(), check_figure4()}) {
    CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
  }
  ValidateOptions o;
  o.samples = 20'000;
  const CheckResult det = check_determinism(o);
  CHECK_MESSAGE(det.passed, det.detail);
}

TEST_CASE("loose-variance check names the winner") {
  ValidateOptions o;
  o.samples = 100'000;
  const CheckResult r = check_loose_variance(o);
  CHECK(r.passed);
  CHECK(r.detail.find("winner=series_1_over_16") != std::string::npos);
}

}  // TEST_SUITE
