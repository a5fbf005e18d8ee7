#pragma once

#include <array>

#include "relaysim/regions.hpp"

namespace relaysim {

/// Which statistical branch of the die table applies. `p3_le_p4` orders the
/// exclusive-region probabilities; `cell` indexes the four ranges of
/// (P_R2 - P_R1) relative to P_min and 2*P_max - P_min (1-based, boundary
/// ties resolve to the lower cell).
struct StatisticalBranch {
  bool p3_le_p4 = true;
  int cell = 1;
};

StatisticalBranch identify_branch(const RegionProbabilities& probs);

/// The four dice of the randomized mode-selection policy, fully normalized
/// (last face materialized as 1 minus the rest).
///
///   die1 (region R1): faces -> M3, M6
///   die2 (region R2): faces -> M1, M2, M6
///   die3 (region R3): faces -> M1, M4, M7
///   die4 (region R4): faces -> M2, M5, M7
struct DiceTable {
  std::array<double, 2> die1{};
  std::array<double, 3> die2{};
  std::array<double, 3> die3{};
  std::array<double, 3> die4{};
  StatisticalBranch branch;
  double fairness = 0.0;  ///< the lambda actually used (after clamping)
};

/// Mode behind face `face` (0-based) of die `die_index` (1..4).
Mode die_face_mode(int die_index, int face);

/// Builds the dice for the given region statistics. `fairness` parameterizes
/// the free split where one exists (the under-supplied direction's die):
/// p^(2) = lambda * s, p^(1) = (1 - lambda) * s with s the constrained face
/// sum; lambda is clamped to the interval keeping the coupled die inside
/// [0,1]. Cells without the degree of freedom ignore it.
DiceTable build_dice(const RegionProbabilities& probs, double fairness);

/// Dice with the free split chosen to maximize the user1->user2 rate
/// (per-user rates are affine in lambda, so an endpoint is optimal).
DiceTable build_dice_max_r12(const RegionProbabilities& probs);

/// Rolls the region's die. Consumes exactly one uniform variate per call,
/// none in R5.
Mode select_mode(SnrRegion region, const DiceTable& dice, Rng& rng);

/// Stationary per-link rates implied by the dice under the never-empty-buffer
/// idealization.
struct LinkRates {
  double r_1r = 0.0;  ///< user1 -> relay
  double r_2r = 0.0;  ///< user2 -> relay
  double r_r1 = 0.0;  ///< relay -> user1
  double r_r2 = 0.0;  ///< relay -> user2
};

LinkRates expected_rates(const RegionProbabilities& probs, const DiceTable& dice,
                         double rate0);

}  // namespace relaysim
