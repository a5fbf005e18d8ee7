#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "relaysim/engine.hpp"

namespace relaysim {

/// Lagrange multipliers of the two queue-balance constraints. Candidate
/// optima live in the triangle mu1 + mu2 <= 1, mu1 + 2*mu2 >= 1,
/// 2*mu1 + mu2 >= 1, with corners A = (0,1), B = (1/3,1/3), C = (1,0).
struct SelectionWeights {
  double mu1 = 0.0;
  double mu2 = 0.0;

  bool feasible(double tol = 1e-9) const;
};

/// Per-mode selection metrics for given weights and decodability flags:
///   L1 = (1-mu1) O1 R0      L4 = mu2 O4 R0
///   L2 = (1-mu2) O2 R0      L5 = mu1 O5 R0
///   L3 = (2-mu1-mu2) O3 R0  L6 = (mu1+mu2) O6 R0   L7 = 0
/// Rejects infeasible weights.
std::array<double, 7> selection_metrics(const SelectionWeights& weights,
                                        const std::array<bool, 7>& o_flags,
                                        double rate0);

/// Characteristic decodability flags of a region (identical for every draw
/// inside it).
std::array<bool, 7> region_o_flags(SnrRegion region);

/// Weight point implied by a statistical branch: cells 1-3 sit at corner A
/// (or C under the swapped ordering), cell 4 at corner B.
SelectionWeights branch_weight_point(const StatisticalBranch& branch);

struct KktCheck {
  SnrRegion region;
  Mode mode;
  double die_prob;
  double metric;
  double max_metric;
  bool ok;
};

struct KktReport {
  StatisticalBranch branch;
  SelectionWeights weights;
  std::vector<KktCheck> checks;
  bool pass = true;

  std::string to_json() const;
};

/// Checks that every mode the dice select with positive probability attains
/// the maximum selection metric of its region (regions of zero probability
/// are skipped; conventions there are arbitrary). Violations land in the
/// report, never in exceptions.
KktReport verify_policy_kkt(const RegionProbabilities& probs, const DiceTable& dice);

struct DpOptions {
  /// Largest queue level representable; stores into a full buffer waste the
  /// slot. Negative: use the horizon length, which reproduces the unbounded
  /// system exactly (queues can never exceed the slot index).
  std::int64_t queue_cap = -1;
  std::uint64_t horizon_cap = 10'000;
  bool want_modes = false;
};

struct DpResult {
  std::uint64_t delivered_packets = 0;
  double delivered_bits = 0.0;
  double per_slot_bits = 0.0;
  std::vector<Mode> modes;  ///< one optimal sequence (want_modes only)
};

/// Exact finite-horizon maximization of delivered bits over a realized fading
/// trace, by dynamic programming over (slot, q1, q2) with the engine's queue
/// transitions. With a finite queue_cap the value is the exact optimum of the
/// cap-limited system, a lower bound on the unbounded optimum; it dominates
/// every policy whose queues stay within the cap.
DpResult dp_offline_optimum(std::span<const ChannelDraw> trace, const Thresholds& thr,
                            double rate0, const DpOptions& options = {});

}  // namespace relaysim
