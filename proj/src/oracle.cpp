#include "relaysim/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace relaysim {
namespace {

constexpr double kMetricTol = 1e-9;

struct RegionDie {
  SnrRegion region;
  int die_index;  // 0: the degenerate R5 "die" (M7 with probability 1)
};

constexpr RegionDie kRegionDice[] = {
    {SnrRegion::R1, 1}, {SnrRegion::R2, 2}, {SnrRegion::R3, 3},
    {SnrRegion::R4, 4}, {SnrRegion::R5, 0},
};

double region_probability(const RegionProbabilities& p, SnrRegion r) {
  switch (r) {
    case SnrRegion::R1: return p.p_r1;
    case SnrRegion::R2: return p.p_r2;
    case SnrRegion::R3: return p.p_r3;
    case SnrRegion::R4: return p.p_r4;
    case SnrRegion::R5: return p.p_r5;
  }
  return 0.0;
}

}  // namespace

bool SelectionWeights::feasible(double tol) const {
  return mu1 >= -tol && mu2 >= -tol && mu1 + mu2 <= 1.0 + tol &&
         mu1 + 2.0 * mu2 >= 1.0 - tol && 2.0 * mu1 + mu2 >= 1.0 - tol;
}

std::array<double, 7> selection_metrics(const SelectionWeights& w,
                                        const std::array<bool, 7>& o, double rate0) {
  if (!w.feasible())
    throw std::invalid_argument("selection_metrics: weights outside the feasible triangle");
  return {
      (1.0 - w.mu1) * o[0] * rate0,
      (1.0 - w.mu2) * o[1] * rate0,
      (2.0 - w.mu1 - w.mu2) * o[2] * rate0,
      w.mu2 * o[3] * rate0,
      w.mu1 * o[4] * rate0,
      (w.mu1 + w.mu2) * o[5] * rate0,
      0.0,
  };
}

std::array<bool, 7> region_o_flags(SnrRegion region) {
  switch (region) {
    case SnrRegion::R1: return {true, true, true, true, true, true, true};
    case SnrRegion::R2: return {true, true, false, true, true, true, true};
    case SnrRegion::R3: return {true, false, false, true, false, false, true};
    case SnrRegion::R4: return {false, true, false, false, true, false, true};
    case SnrRegion::R5: return {false, false, false, false, false, false, true};
  }
  return {};
}

SelectionWeights branch_weight_point(const StatisticalBranch& branch) {
  if (branch.cell == 4) return {1.0 / 3.0, 1.0 / 3.0};
  return branch.p3_le_p4 ? SelectionWeights{0.0, 1.0} : SelectionWeights{1.0, 0.0};
}

KktReport verify_policy_kkt(const RegionProbabilities& probs, const DiceTable& dice) {
  KktReport report;
  report.branch = dice.branch;
  report.weights = branch_weight_point(dice.branch);

  for (const RegionDie& rd : kRegionDice) {
    if (region_probability(probs, rd.region) <= kProbEps) continue;
    const auto flags = region_o_flags(rd.region);
    const auto metrics = selection_metrics(report.weights, flags, 1.0);
    double max_metric = 0.0;
    for (double m : metrics) max_metric = std::max(max_metric, m);

    const int n_faces = rd.die_index == 0 ? 1 : (rd.die_index == 1 ? 2 : 3);
    for (int face = 0; face < n_faces; ++face) {
      double prob = 1.0;
      Mode mode = Mode::M7;
      if (rd.die_index == 1) {
        prob = dice.die1[face];
        mode = die_face_mode(1, face);
      } else if (rd.die_index == 2) {
        prob = dice.die2[face];
        mode = die_face_mode(2, face);
      } else if (rd.die_index == 3) {
        prob = dice.die3[face];
        mode = die_face_mode(3, face);
      } else if (rd.die_index == 4) {
        prob = dice.die4[face];
        mode = die_face_mode(4, face);
      }
      if (prob <= kProbEps) continue;
      const double metric = metrics[static_cast<int>(mode)];
      report.checks.push_back({rd.region, mode, prob, metric, max_metric,
                               metric >= max_metric - kMetricTol});
      if (!report.checks.back().ok) report.pass = false;
    }
  }
  return report;
}

std::string KktReport::to_json() const {
  nlohmann::json j;
  j["branch"] = {{"p3_le_p4", branch.p3_le_p4}, {"cell", branch.cell}};
  j["weights"] = {{"mu1", weights.mu1}, {"mu2", weights.mu2}};
  j["pass"] = pass;
  j["checks"] = nlohmann::json::array();
  for (const KktCheck& c : checks) {
    j["checks"].push_back({{"region", to_string(c.region)},
                           {"mode", to_string(c.mode)},
                           {"die_prob", c.die_prob},
                           {"metric", c.metric},
                           {"max_metric", c.max_metric},
                           {"ok", c.ok}});
  }
  return j.dump(2);
}

namespace {

// action ids: 0 idle/M7, 1 s1/M1, 2 s2/M2, 3 s12/M3, 4 d2/M4, 5 d1/M5, 6 d12/M6
constexpr Mode kActionMode[7] = {Mode::M7, Mode::M1, Mode::M2, Mode::M3,
                                 Mode::M4, Mode::M5, Mode::M6};

struct ActionSet {
  bool s1, s2, s12, d1, d2, d12;
};

ActionSet region_actions(SnrRegion r) {
  const bool up1 = r == SnrRegion::R1 || r == SnrRegion::R2 || r == SnrRegion::R3;
  const bool up2 = r == SnrRegion::R1 || r == SnrRegion::R2 || r == SnrRegion::R4;
  return ActionSet{up1, up2, r == SnrRegion::R1, up2, up1,
                   r == SnrRegion::R1 || r == SnrRegion::R2};
}

// Reference layer update, kept simple; also records the argmax action per
// state for sequence recovery.
void dp_layer_scalar(SnrRegion r, std::int64_t cap, const std::uint16_t* value,
                     std::uint16_t* next, std::uint8_t* layer_choice) {
  const ActionSet a = region_actions(r);
  const std::size_t side = static_cast<std::size_t>(cap) + 1;
  for (std::int64_t q1 = 0; q1 <= cap; ++q1) {
    const std::size_t row = static_cast<std::size_t>(q1) * side;
    const std::size_t row_up = static_cast<std::size_t>(std::min(q1 + 1, cap)) * side;
    const std::size_t row_dn =
        static_cast<std::size_t>(std::max<std::int64_t>(q1 - 1, 0)) * side;
    for (std::int64_t q2 = 0; q2 <= cap; ++q2) {
      const std::size_t up2 = static_cast<std::size_t>(std::min(q2 + 1, cap));
      std::uint16_t best = value[row + q2];  // idle
      std::uint8_t best_a = 0;
      auto consider = [&](bool avail, std::uint16_t v, std::uint8_t id) {
        if (avail && v > best) {
          best = v;
          best_a = id;
        }
      };
      consider(a.s1, value[row_up + q2], 1);
      consider(a.s2, value[row + up2], 2);
      consider(a.s12, value[row_up + up2], 3);
      consider(a.d2 && q2 >= 1, 1 + value[row + q2 - 1], 4);
      consider(a.d1 && q1 >= 1, 1 + value[row_dn + q2], 5);
      consider(a.d12 && q1 >= 1 && q2 >= 1, 2 + value[row_dn + q2 - 1], 6);
      next[row + q2] = best;
      if (layer_choice) layer_choice[row + q2] = best_a;
    }
  }
}

inline std::uint16_t umax(std::uint16_t a, std::uint16_t b) { return a > b ? a : b; }

// Branch-free layer update specialized per region type; the hot path for
// long horizons. Stores clamp at the cap (the packet is wasted), idling is
// dominated by storing, and every inner loop is a plain shifted-max scan.
void dp_layer_fast(SnrRegion r, std::int64_t cap, const std::uint16_t* value,
                   std::uint16_t* next) {
  const std::size_t side = static_cast<std::size_t>(cap) + 1;
  if (r == SnrRegion::R5) {
    std::copy(value, value + side * side, next);
    return;
  }
  for (std::int64_t q1 = 0; q1 <= cap; ++q1) {
    const std::uint16_t* same = value + static_cast<std::size_t>(q1) * side;
    const std::uint16_t* up = value + static_cast<std::size_t>(std::min(q1 + 1, cap)) * side;
    const std::uint16_t* dn = value + static_cast<std::size_t>(std::max<std::int64_t>(q1 - 1, 0)) * side;
    std::uint16_t* out = next + static_cast<std::size_t>(q1) * side;
    const bool has_q1 = q1 >= 1;
    switch (r) {
      case SnrRegion::R3:  // store into B1 or drain B2
        out[0] = up[0];
        for (std::int64_t q2 = 1; q2 <= cap; ++q2)
          out[q2] = umax(up[q2], 1 + same[q2 - 1]);
        break;
      case SnrRegion::R4:  // store into B2 or drain B1
        if (has_q1) {
          for (std::int64_t q2 = 0; q2 < cap; ++q2)
            out[q2] = umax(same[q2 + 1], 1 + dn[q2]);
          out[cap] = umax(same[cap], 1 + dn[cap]);
        } else {
          for (std::int64_t q2 = 0; q2 < cap; ++q2) out[q2] = same[q2 + 1];
          out[cap] = same[cap];
        }
        break;
      case SnrRegion::R2:  // everything except the joint store
        if (has_q1) {
          out[0] = umax(umax(up[0], same[1]), 1 + dn[0]);
          for (std::int64_t q2 = 1; q2 < cap; ++q2)
            out[q2] = umax(umax(umax(up[q2], same[q2 + 1]),
                                umax(std::uint16_t(1 + same[q2 - 1]),
                                     std::uint16_t(1 + dn[q2]))),
                           std::uint16_t(2 + dn[q2 - 1]));
          out[cap] = umax(umax(up[cap], std::uint16_t(1 + same[cap - 1])),
                          umax(std::uint16_t(1 + dn[cap]), std::uint16_t(2 + dn[cap - 1])));
        } else {
          out[0] = umax(up[0], same[1]);
          for (std::int64_t q2 = 1; q2 < cap; ++q2)
            out[q2] = umax(umax(up[q2], same[q2 + 1]), std::uint16_t(1 + same[q2 - 1]));
          out[cap] = umax(up[cap], std::uint16_t(1 + same[cap - 1]));
        }
        break;
      case SnrRegion::R1:  // joint store dominates the single stores
        if (has_q1) {
          out[0] = umax(up[1], 1 + dn[0]);
          for (std::int64_t q2 = 1; q2 < cap; ++q2)
            out[q2] = umax(umax(up[q2 + 1], std::uint16_t(1 + same[q2 - 1])),
                           umax(std::uint16_t(1 + dn[q2]), std::uint16_t(2 + dn[q2 - 1])));
          out[cap] = umax(umax(up[cap], std::uint16_t(1 + same[cap - 1])),
                          umax(std::uint16_t(1 + dn[cap]), std::uint16_t(2 + dn[cap - 1])));
        } else {
          out[0] = up[1];
          for (std::int64_t q2 = 1; q2 < cap; ++q2)
            out[q2] = umax(up[q2 + 1], std::uint16_t(1 + same[q2 - 1]));
          out[cap] = umax(up[cap], std::uint16_t(1 + same[cap - 1]));
        }
        break;
      default:
        break;
    }
  }
}

}  // namespace

DpResult dp_offline_optimum(std::span<const ChannelDraw> trace, const Thresholds& thr,
                            double rate0, const DpOptions& options) {
  const std::uint64_t n = trace.size();
  if (n == 0) throw std::invalid_argument("dp_offline_optimum: empty trace");
  if (n > options.horizon_cap)
    throw std::invalid_argument("dp_offline_optimum: horizon above the configured cap");
  if (n > 30000)
    throw std::invalid_argument("dp_offline_optimum: horizon too long for 16-bit values");

  const std::int64_t cap =
      options.queue_cap < 0 ? static_cast<std::int64_t>(n)
                            : std::min<std::int64_t>(options.queue_cap,
                                                     static_cast<std::int64_t>(n));
  if (cap < 0) throw std::invalid_argument("dp_offline_optimum: negative queue cap");
  const std::size_t side = static_cast<std::size_t>(cap) + 1;
  if (side * side > (std::size_t{1} << 24))
    throw std::invalid_argument("dp_offline_optimum: queue cap too large; pass a cap");
  if (options.want_modes && n * side * side > (std::size_t{1} << 28))
    throw std::invalid_argument("dp_offline_optimum: mode recovery needs n*(cap+1)^2 small");

  DpResult result;
  if (cap == 0) {  // nothing can be buffered, so nothing can ever be delivered
    if (options.want_modes) result.modes.assign(n, Mode::M7);
    return result;
  }

  std::vector<SnrRegion> region(n);
  for (std::uint64_t i = 0; i < n; ++i) region[i] = classify_region(trace[i], thr);

  // Backward value iteration; value[q1*side + q2] = max packets deliverable
  // from this slot on, in the cap-limited system.
  std::vector<std::uint16_t> value(side * side, 0), next(side * side, 0);
  std::vector<std::uint8_t> choice;  // per-layer argmax, only for want_modes
  if (options.want_modes) choice.resize(n * side * side);

  for (std::uint64_t ii = n; ii-- > 0;) {
    if (options.want_modes)
      dp_layer_scalar(region[ii], cap, value.data(), next.data(),
                      choice.data() + ii * side * side);
    else
      dp_layer_fast(region[ii], cap, value.data(), next.data());
    value.swap(next);
  }

  result.delivered_packets = value[0];
  result.delivered_bits = value[0] * rate0;
  result.per_slot_bits = result.delivered_bits / static_cast<double>(n);

  if (options.want_modes) {
    result.modes.reserve(n);
    std::int64_t q1 = 0, q2 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint8_t a =
          choice[i * side * side + static_cast<std::size_t>(q1) * side + q2];
      result.modes.push_back(kActionMode[a]);
      switch (a) {
        case 1: q1 = std::min(q1 + 1, cap); break;
        case 2: q2 = std::min(q2 + 1, cap); break;
        case 3: q1 = std::min(q1 + 1, cap); q2 = std::min(q2 + 1, cap); break;
        case 4: --q2; break;
        case 5: --q1; break;
        case 6: --q1; --q2; break;
        default: break;
      }
    }
  }
  return result;
}

}  // namespace relaysim
