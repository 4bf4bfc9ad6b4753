#pragma once

#include <string_view>
#include <vector>

namespace cavity {

/// Red sideband sits below the empty-cavity resonance, blue above it.
enum class Side { red, blue };

std::string_view to_string(Side side);

/// Which computation produced a stick spectrum.
enum class SpectrumOrigin { exact_diag, lanczos_seed, tavis_cummings };

std::string_view to_string(SpectrumOrigin origin);

/// One golden-rule transmission line: detuning from E_0 (units of g) and weight.
struct StickLine {
  double omega = 0.0;
  double weight = 0.0;
};

/// @brief Golden-rule stick spectrum I(omega) ~ sum_j |<Psi_j|Psi_I>|^2 delta(omega_j - E_0 - omega).
///
/// Lines are sorted by omega, weights are nonnegative and sum to at most 1.
struct StickSpectrum {
  std::vector<StickLine> lines;
  SpectrumOrigin origin = SpectrumOrigin::exact_diag;

  double total_weight() const;
};

}  // namespace cavity
