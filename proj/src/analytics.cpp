#include "relaysim/analytics.hpp"

namespace relaysim {

bool first_branch(const RegionProbabilities& probs) {
  return probs.p_r2 - probs.p_r1 <= 2.0 * probs.p_max() - probs.p_min() + kProbEps;
}

double max_sum_throughput(const RegionProbabilities& probs, double rate0) {
  probs.validate();
  if (first_branch(probs)) return (probs.p_r1 + probs.p_r2 + probs.p_min()) * rate0;
  return 2.0 / 3.0 * (2.0 * probs.p_r1 + probs.p_r2 + probs.p_r3 + probs.p_r4) * rate0;
}

double system_outage(const RegionProbabilities& probs) {
  probs.validate();
  if (first_branch(probs)) return probs.p_r5 + probs.p_max();
  return 1.0 / 3.0 - 2.0 / 3.0 * (probs.p_r1 - probs.p_r5);
}

HighSnrSummary high_snr_summary(const SystemParams& params) {
  const HighSnrPmax pmax = high_snr_pmax(params);
  return HighSnrSummary{params.rate0, pmax.exact, pmax.asymptote};
}

}  // namespace relaysim
