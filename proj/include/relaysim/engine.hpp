#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relaysim/policy.hpp"

namespace relaysim {

/// Relay queue levels, stored as integer counts of rate0-sized packets so the
/// conservation identity (stored - delivered = backlog) is bit-exact.
struct RelayBuffers {
  std::int64_t q1 = 0;
  std::int64_t q2 = 0;
};

/// Outcome of one slot.
struct SlotRecord {
  std::uint64_t index = 0;
  SnrRegion region = SnrRegion::R5;
  Mode mode = Mode::M7;
  bool stored_1 = false;       ///< a packet entered B1
  bool stored_2 = false;       ///< a packet entered B2
  bool delivered_12 = false;   ///< a packet reached user 2 (from B1)
  bool delivered_21 = false;   ///< a packet reached user 1 (from B2)
  bool starved = false;        ///< relay-transmit mode, channel fine, buffer short
};

/// Applies one slot's queue transition for an already-selected mode.
/// Failures (channel or buffer) change nothing; `starved` marks the
/// buffer-limited subset of them.
SlotRecord step(RelayBuffers& buffers, const ChannelDraw& draw, Mode mode,
                const Thresholds& thr);

/// Averages over a simulation window.
struct ThroughputReport {
  double r_1r = 0, r_2r = 0;   ///< admission rates into B1 / B2, bits/symbol
  double r_r1 = 0, r_r2 = 0;   ///< delivery rates to user 1 / user 2
  double r_12 = 0, r_21 = 0;   ///< end-to-end (counted at the relay-user hop)
  double r_sum = 0;
  double r_sum_stderr = 0;     ///< batch-means standard error of r_sum
  double f_12 = 0, f_21 = 0, f_sys = 0;
  double starvation_rate = 0;
  std::uint64_t n_slots = 0;   ///< slots in the averaged window
  RelayBuffers final_buffers;
  std::int64_t max_queue = 0;  ///< max of q1, q2 over the whole run
};

struct RunConfig {
  std::uint64_t n_slots = 1'000'000;
  std::uint64_t warmup = 10'000;       ///< slots discarded before averaging
  std::uint64_t seed = 1;
  std::uint64_t stream_index = 0;      ///< sweep points use one stream each
  std::optional<double> fairness;      ///< absent: maximize r_12
  /// Optional per-slot sink (tracing); called for every slot including warmup.
  std::function<void(const SlotRecord&, const ChannelDraw&, const RelayBuffers&)>
      slot_sink;
};

/// Slot-by-slot simulation of the mode-selection policy:
/// draw -> classify -> roll die -> queue update -> accounting.
ThroughputReport run(const SystemParams& params, const RunConfig& config);

/// Same policy loop over a pre-drawn fading trace (for oracle comparisons).
/// `die_seed` feeds only the die rolls.
ThroughputReport run_policy_on_trace(std::span<const ChannelDraw> trace,
                                     const SystemParams& params,
                                     const DiceTable& dice, std::uint64_t die_seed,
                                     std::uint64_t warmup = 0);

/// Fading trace generator shared by the engine and the oracles.
std::vector<ChannelDraw> make_trace(const SystemParams& params, std::uint64_t n,
                                    std::uint64_t seed);

}  // namespace relaysim
