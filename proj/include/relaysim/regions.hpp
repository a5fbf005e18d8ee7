#pragma once

#include <algorithm>
#include <cstdint>

#include "relaysim/channel.hpp"

namespace relaysim {

/// Probabilities of the five SNR regions. Everything downstream (dice,
/// closed-form throughput/outage, benchmarks) is driven by these five numbers.
struct RegionProbabilities {
  double p_r1 = 0.0;
  double p_r2 = 0.0;
  double p_r3 = 0.0;
  double p_r4 = 0.0;
  double p_r5 = 0.0;

  double p_max() const { return std::max(p_r3, p_r4); }
  double p_min() const { return std::min(p_r3, p_r4); }

  /// throws std::invalid_argument unless all in [0,1] and summing to 1
  /// within 1e-9 (simplex inputs from tests) -- analytic outputs hold 1e-12.
  void validate() const;
};

/// Closed-form region probabilities for Rayleigh fading.
RegionProbabilities analytic_probabilities(const SystemParams& params);

/// Frequency estimates over n_samples independent draws.
RegionProbabilities empirical_probabilities(const SystemParams& params,
                                            std::uint64_t n_samples, Rng& rng);

struct HighSnrPmax {
  double exact = 0.0;      ///< (1 - e^{-g_thr/(Omin g)}) e^{-g_thr/(Omax g)}
  double asymptote = 0.0;  ///< g_thr / (Omin g)
};

/// Exact max(P_R3, P_R4) and its first-order high-SNR asymptote.
HighSnrPmax high_snr_pmax(const SystemParams& params);

}  // namespace relaysim
