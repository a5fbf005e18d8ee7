#pragma once

#include "relaysim/regions.hpp"

namespace relaysim {

/// True when the statistics fall in the first branch of the closed-form
/// throughput/outage expressions (evaluated division-free so P_min = 0 is the
/// proper limit).
bool first_branch(const RegionProbabilities& probs);

/// Closed-form maximum sum throughput of the mode-selection policy.
double max_sum_throughput(const RegionProbabilities& probs, double rate0);

/// Closed-form minimum system outage probability.
double system_outage(const RegionProbabilities& probs);

struct HighSnrSummary {
  double r_sum_limit = 0.0;     ///< rate0
  double f_sys_exact = 0.0;     ///< exact P_max at these params
  double f_sys_asymptote = 0.0; ///< gamma_thr / (Omega_min * gamma)
};

HighSnrSummary high_snr_summary(const SystemParams& params);

}  // namespace relaysim
