#pragma once

#include <vector>

#include "relaysim/engine.hpp"

namespace relaysim {

enum class Scheme : std::uint8_t { Proposed, TwoWay, Tdbc, Mabc };

const char* to_string(Scheme scheme);

/// Per-link fixed-rate success probabilities and the multiple-access success
/// probability (both users decoded jointly, i.e. region R1).
struct LinkSuccess {
  double e1 = 0.0;
  double e2 = 0.0;
  double p_mac = 0.0;
};

LinkSuccess link_success_probs(const SystemParams& params);

/// A benchmark schedule: the modes of its phases and the optimized fraction
/// of slots allocated to each.
struct BenchmarkPlan {
  Scheme scheme = Scheme::TwoWay;
  double r_sum = 0.0;
  double f_sys = 0.0;
  std::vector<Mode> phase_modes;
  std::vector<double> fractions;  ///< nonnegative, sum to 1
};

/// Buffered-flow throughput maximization over the phase time fractions.
/// Phases are fixed schedules of the same seven modes with the same
/// decodability rules; the broadcast phase is mode M6 (delivers both
/// directions together or neither).
///   TwoWay: phases M1, M5, M2, M4
///   TDBC:   phases M1, M2, M6
///   MABC:   phases M3, M6
BenchmarkPlan optimize_benchmark(Scheme scheme, const SystemParams& params);

/// Grid-search refinement of the same flow objective (step 1e-3 + local
/// refinement to 1e-6); sanity oracle for the closed forms.
BenchmarkPlan optimize_benchmark_grid(Scheme scheme, const SystemParams& params);

/// Simulates the optimized schedule: phases laid out in blocks, slot counts
/// by largest-remainder apportionment, every slot stepped with the engine's
/// queue transitions.
ThroughputReport simulate_benchmark(Scheme scheme, const SystemParams& params,
                                    std::uint64_t n_slots, std::uint64_t seed,
                                    std::uint64_t stream_index = 0);

}  // namespace relaysim
