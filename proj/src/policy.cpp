#include "relaysim/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysim {
namespace {

// Face probabilities must land in [0,1] up to rounding; anything worse means
// the branch identification and the formulas disagree.
double checked_face(double p, const char* what) {
  if (!(p > -kProbEps && p < 1.0 + kProbEps) || !std::isfinite(p))
    throw std::logic_error(std::string("build_dice: face ") + what + " outside [0,1]");
  return std::clamp(p, 0.0, 1.0);
}

template <std::size_t N>
void finalize_die(std::array<double, N>& die, const char* what) {
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    die[i] = checked_face(die[i], what);
    head += die[i];
  }
  die[N - 1] = checked_face(1.0 - head, what);
}

int roll(const double* faces, int n, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    acc += faces[i];
    if (u < acc) return i;
  }
  return n - 1;
}

}  // namespace

StatisticalBranch identify_branch(const RegionProbabilities& probs) {
  probs.validate();
  StatisticalBranch b;
  b.p3_le_p4 = probs.p_r3 <= probs.p_r4 + kProbEps;
  const double pmin = b.p3_le_p4 ? probs.p_r3 : probs.p_r4;
  const double pmax = b.p3_le_p4 ? probs.p_r4 : probs.p_r3;
  // Conditions multiplied through by P_min, so P_min = 0 stays well defined
  // (and matches the limit of the divided form).
  const double d = probs.p_r2 - probs.p_r1;
  if (d <= kProbEps)
    b.cell = 1;
  else if (d <= pmin + kProbEps)
    b.cell = 2;
  else if (d <= 2.0 * pmax - pmin + kProbEps)
    b.cell = 3;
  else
    b.cell = 4;
  return b;
}

Mode die_face_mode(int die_index, int face) {
  static constexpr Mode kFaces[4][3] = {
      {Mode::M3, Mode::M6, Mode::M7},  // die1 has two faces; third unused
      {Mode::M1, Mode::M2, Mode::M6},
      {Mode::M1, Mode::M4, Mode::M7},
      {Mode::M2, Mode::M5, Mode::M7},
  };
  return kFaces[die_index - 1][face];
}

DiceTable build_dice(const RegionProbabilities& probs, double fairness) {
  probs.validate();
  if (!(fairness >= 0.0 && fairness <= 1.0))
    throw std::invalid_argument("build_dice: fairness must be in [0,1]");

  const double p1 = probs.p_r1, p2 = probs.p_r2, p3 = probs.p_r3, p4 = probs.p_r4;
  const StatisticalBranch br = identify_branch(probs);
  DiceTable dice;
  dice.branch = br;
  dice.fairness = fairness;

  // die 1: never-rolled convention (1,0) when R1 has measure zero
  if (p1 <= kProbEps)
    dice.die1 = {1.0, 0.0};
  else if (br.cell == 1)
    dice.die1 = {0.5 + p2 / (2.0 * p1), 0.0};
  else
    dice.die1 = {1.0, 0.0};

  // die 2: (0,0,1) when R2 has measure zero or unused
  if (p2 <= kProbEps || br.cell <= 2) {
    dice.die2 = {0.0, 0.0, 0.0};
  } else if (br.cell == 3) {
    if (br.p3_le_p4)
      dice.die2 = {0.5 - (p1 + p3) / (2.0 * p2), 0.0, 0.0};
    else
      dice.die2 = {0.0, 0.5 - (p1 + p4) / (2.0 * p2), 0.0};
  } else {
    dice.die2 = {1.0 / 3.0 - (p1 + 2.0 * p3 - p4) / (3.0 * p2),
                 1.0 / 3.0 - (p1 + 2.0 * p4 - p3) / (3.0 * p2), 0.0};
  }

  // dice 3 and 4 are coupled; the degree of freedom lives on the die of the
  // larger exclusive region (cells 1-2 only)
  const double pmin = br.p3_le_p4 ? p3 : p4;
  const double pmax = br.p3_le_p4 ? p4 : p3;
  if (br.cell <= 2) {
    std::array<double, 3> free_die{}, coupled_die{};
    if (pmin <= kProbEps) {
      // measure-zero exclusive region: its die is never rolled, silent by
      // convention; the other side has nothing to balance against
      free_die = {0.0, 0.0, 1.0};
      coupled_die = {0.0, 0.0, 1.0};
    } else {
      const double ratio =
          br.cell == 2 ? std::clamp((p2 - p1) / pmin, 0.0, 1.0) : 0.0;
      const double lambda = std::clamp(fairness, 0.0, 1.0 - ratio);
      dice.fairness = lambda;
      const double face_sum = pmin / pmax;
      const double free2 = lambda * face_sum;  // face feeding the coupled die
      const double coupled1 = (pmax / pmin) * free2 + ratio;  // = lambda + ratio
      free_die = {(1.0 - lambda) * face_sum, free2, 0.0};
      coupled_die = {coupled1, 1.0 - coupled1, 0.0};
    }
    if (br.p3_le_p4) {
      dice.die4 = free_die;
      dice.die3 = coupled_die;
    } else {
      dice.die3 = free_die;
      dice.die4 = coupled_die;
    }
  } else if (br.cell == 3) {
    if (br.p3_le_p4) {
      dice.die3 = {1.0, 0.0, 0.0};
      dice.die4 = {(p2 + p3 - p1) / (2.0 * p4), 0.0, 0.0};
    } else {
      dice.die3 = {(p2 + p4 - p1) / (2.0 * p3), 0.0, 0.0};
      dice.die4 = {1.0, 0.0, 0.0};
    }
  } else {
    dice.die3 = {1.0, 0.0, 0.0};
    dice.die4 = {1.0, 0.0, 0.0};
  }

  finalize_die(dice.die1, "die1");
  finalize_die(dice.die2, "die2");
  finalize_die(dice.die3, "die3");
  finalize_die(dice.die4, "die4");
  return dice;
}

DiceTable build_dice_max_r12(const RegionProbabilities& probs) {
  DiceTable lo = build_dice(probs, 0.0);
  DiceTable hi = build_dice(probs, 1.0);
  const double r12_lo = expected_rates(probs, lo, 1.0).r_r2;
  const double r12_hi = expected_rates(probs, hi, 1.0).r_r2;
  return r12_hi >= r12_lo ? hi : lo;
}

Mode select_mode(SnrRegion region, const DiceTable& dice, Rng& rng) {
  switch (region) {
    case SnrRegion::R1:
      return die_face_mode(1, roll(dice.die1.data(), 2, rng));
    case SnrRegion::R2:
      return die_face_mode(2, roll(dice.die2.data(), 3, rng));
    case SnrRegion::R3:
      return die_face_mode(3, roll(dice.die3.data(), 3, rng));
    case SnrRegion::R4:
      return die_face_mode(4, roll(dice.die4.data(), 3, rng));
    case SnrRegion::R5:
      return Mode::M7;
  }
  return Mode::M7;
}

LinkRates expected_rates(const RegionProbabilities& probs, const DiceTable& dice,
                         double rate0) {
  probs.validate();
  const double p1 = probs.p_r1, p2 = probs.p_r2, p3 = probs.p_r3, p4 = probs.p_r4;
  LinkRates r;
  // M3 feeds both buffers; M1/M2 are picked in R2/R3 and R2/R4; M6 drains
  // both buffers in R1 and R2; M4/M5 drain one buffer in R3/R4.
  r.r_1r = (p1 * dice.die1[0] + p2 * dice.die2[0] + p3 * dice.die3[0]) * rate0;
  r.r_2r = (p1 * dice.die1[0] + p2 * dice.die2[1] + p4 * dice.die4[0]) * rate0;
  r.r_r1 = (p1 * dice.die1[1] + p2 * dice.die2[2] + p3 * dice.die3[1]) * rate0;
  r.r_r2 = (p1 * dice.die1[1] + p2 * dice.die2[2] + p4 * dice.die4[1]) * rate0;
  return r;
}

}  // namespace relaysim
