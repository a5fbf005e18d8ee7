#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "relaysim/analytics.hpp"
#include "relaysim/oracle.hpp"
#include "support/oracles.hpp"

using namespace relaysim;

TEST_CASE("selection metrics at the corner points") {
  const auto r1_flags = region_o_flags(SnrRegion::R1);

  SUBCASE("point B singles out the multiple-access mode") {
    const auto m = selection_metrics({1.0 / 3.0, 1.0 / 3.0}, r1_flags, 1.0);
    CHECK(m[0] == doctest::Approx(2.0 / 3.0));
    CHECK(m[1] == doctest::Approx(2.0 / 3.0));
    CHECK(m[2] == doctest::Approx(4.0 / 3.0));
    CHECK(m[3] == doctest::Approx(1.0 / 3.0));
    CHECK(m[4] == doctest::Approx(1.0 / 3.0));
    CHECK(m[5] == doctest::Approx(2.0 / 3.0));
    CHECK(m[6] == 0.0);
  }

  SUBCASE("point A ties four modes at R0") {
    const auto m = selection_metrics({0.0, 1.0}, r1_flags, 1.0);
    CHECK(m[0] == doctest::Approx(1.0));   // M1
    CHECK(m[2] == doctest::Approx(1.0));   // M3
    CHECK(m[3] == doctest::Approx(1.0));   // M4
    CHECK(m[5] == doctest::Approx(1.0));   // M6
    CHECK(m[1] == doctest::Approx(0.0));
    CHECK(m[4] == doctest::Approx(0.0));
  }

  SUBCASE("nothing decodable: everything collapses to zero") {
    const auto m = selection_metrics({0.5, 0.5}, region_o_flags(SnrRegion::R5), 1.0);
    for (double v : m) CHECK(v == 0.0);
  }

  SUBCASE("infeasible weights are rejected") {
    CHECK_THROWS_AS(selection_metrics({0.2, 0.2}, r1_flags, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(selection_metrics({0.9, 0.9}, r1_flags, 1.0), std::invalid_argument);
  }
}

TEST_CASE("metric identities on random feasible weights") {
  Rng rng(6);
  int tested = 0;
  while (tested < 500) {
    const SelectionWeights w{rng.uniform(), rng.uniform()};
    if (!w.feasible(0.0)) continue;
    ++tested;
    for (SnrRegion r : {SnrRegion::R1, SnrRegion::R2, SnrRegion::R3, SnrRegion::R4}) {
      const auto o = region_o_flags(r);
      const auto m = selection_metrics(w, o, 1.5);
      if (o[0] && o[1] && o[2]) CHECK(m[2] == doctest::Approx(m[0] + m[1]).epsilon(1e-12));
      if (o[3] && o[4] && o[5]) CHECK(m[5] == doctest::Approx(m[3] + m[4]).epsilon(1e-12));
      CHECK(m[6] == 0.0);
    }
  }
}

TEST_CASE("kkt verification of the built dice") {
  SUBCASE("symmetric Rayleigh point, first cell, weights at corner A") {
    const RegionProbabilities p = analytic_probabilities({1.0, 1.0, 10.0, 1.0});
    const DiceTable dice = build_dice(p, 0.4);
    const KktReport rep = verify_policy_kkt(p, dice);
    CHECK(rep.pass);
    CHECK(rep.weights.mu1 == 0.0);
    CHECK(rep.weights.mu2 == 1.0);
    bool saw_m3 = false, saw_m6 = false;
    for (const KktCheck& c : rep.checks) {
      if (c.region == SnrRegion::R1 && c.mode == Mode::M3) saw_m3 = true;
      if (c.region == SnrRegion::R1 && c.mode == Mode::M6) saw_m6 = true;
    }
    CHECK(saw_m3);
    CHECK(saw_m6);
  }

  SUBCASE("fourth cell sits at corner B with a three-way tie in R2") {
    const RegionProbabilities p{0.1, 0.6, 0.1, 0.1, 0.1};
    const DiceTable dice = build_dice(p, 0.0);
    const KktReport rep = verify_policy_kkt(p, dice);
    CHECK(rep.pass);
    CHECK(rep.weights.mu1 == doctest::Approx(1.0 / 3.0));
    int r2_faces = 0;
    for (const KktCheck& c : rep.checks)
      if (c.region == SnrRegion::R2) {
        ++r2_faces;
        CHECK(c.metric == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
      }
    CHECK(r2_faces == 3);
  }

  SUBCASE("randomized sweep over all branches has no violations") {
    Rng rng(404);
    const auto points = testsupport::branch_covering_points(rng, 1000);
    bool branch_seen[8] = {};
    for (const RegionProbabilities& p : points) {
      const DiceTable dice = build_dice(p, rng.uniform());
      const KktReport rep = verify_policy_kkt(p, dice);
      CHECK(rep.pass);
      branch_seen[testsupport::branch_id(rep.branch)] = true;
    }
    for (bool seen : branch_seen) CHECK(seen);
  }

  SUBCASE("report serializes to JSON") {
    const RegionProbabilities p = analytic_probabilities({1.0, 1.0, 10.0, 1.0});
    const KktReport rep = verify_policy_kkt(p, build_dice(p, 0.0));
    const nlohmann::json j = nlohmann::json::parse(rep.to_json());
    CHECK(j["pass"].get<bool>());
    CHECK(j["branch"]["cell"].get<int>() == 1);
    CHECK(j["checks"].size() == rep.checks.size());
  }

  SUBCASE("a wrong die face is reported, not thrown") {
    const RegionProbabilities p = analytic_probabilities({1.0, 1.0, 10.0, 1.0});
    DiceTable dice = build_dice(p, 0.0);
    dice.die3 = {0.0, 0.0, 1.0};  // idling in R3 is metric-suboptimal at corner A
    const KktReport rep = verify_policy_kkt(p, dice);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("offline dynamic program") {
  const Thresholds thr = make_thresholds(1.0);

  SUBCASE("one slot cannot deliver") {
    const std::vector<ChannelDraw> trace{{5.0, 5.0}};
    CHECK(dp_offline_optimum(trace, thr, 1.0).delivered_packets == 0);
  }

  SUBCASE("two good slots deliver one packet each way") {
    const std::vector<ChannelDraw> trace{{5.0, 5.0}, {5.0, 5.0}};
    DpOptions opt;
    opt.want_modes = true;
    const DpResult r = dp_offline_optimum(trace, thr, 1.0, opt);
    CHECK(r.delivered_packets == 2);
    CHECK(r.per_slot_bits == doctest::Approx(1.0));
    REQUIRE(r.modes.size() == 2);
    CHECK(r.modes[0] == Mode::M3);
    CHECK(r.modes[1] == Mode::M6);
  }

  SUBCASE("exact agreement with exhaustive enumeration up to N = 8") {
    const SystemParams params{1.0, 1.0, 4.0, 1.0};
    Rng rng(15);
    for (int trial = 0; trial < 24; ++trial) {
      const std::uint64_t n = 1 + (rng.next_u64() % 8);
      std::vector<ChannelDraw> trace;
      for (std::uint64_t i = 0; i < n; ++i) trace.push_back(draw_gains(rng, params));
      const std::uint64_t brute = testsupport::enumerate_offline_optimum(trace, thr);
      CHECK(dp_offline_optimum(trace, thr, 1.0).delivered_packets == brute);
    }
  }

  SUBCASE("recovered mode sequence replays to the claimed value") {
    const SystemParams params{1.0, 1.0, 8.0, 1.0};
    const auto trace = make_trace(params, 300, 71);
    DpOptions opt;
    opt.want_modes = true;
    const DpResult r = dp_offline_optimum(trace, thr, 1.0, opt);
    RelayBuffers buffers;
    std::uint64_t delivered = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const SlotRecord rec = step(buffers, trace[i], r.modes[i], thr);
      delivered += rec.delivered_12 + rec.delivered_21;
    }
    CHECK(delivered == r.delivered_packets);
  }

  SUBCASE("dominates the policy on the same trace") {
    const SystemParams params{1.0, 1.0, 10.0, 1.0};
    const RegionProbabilities probs = analytic_probabilities(params);
    const DiceTable dice = build_dice_max_r12(probs);
    const double analytic = max_sum_throughput(probs, params.rate0);
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto trace = make_trace(params, 10'000, seed);
      const ThroughputReport pol = run_policy_on_trace(trace, params, dice, seed);
      DpOptions opt;
      opt.queue_cap = std::max<std::int64_t>(64, pol.max_queue + 1);
      const DpResult dp = dp_offline_optimum(trace, thr, params.rate0, opt);
      CHECK(dp.per_slot_bits >= pol.r_sum - 1e-12);
      CHECK(dp.per_slot_bits - pol.r_sum < 0.05 * analytic);
      CHECK(std::abs(dp.per_slot_bits - analytic) < 0.02);
    }
  }

  SUBCASE("fast kernel equals the reference layer update") {
    // want_modes switches to the plain scalar recursion; the values must be
    // identical for any trace and any cap, including caps that clip
    Rng rng(88);
    for (int trial = 0; trial < 40; ++trial) {
      const double db = -5.0 + 30.0 * rng.uniform();
      const SystemParams params{1.0, 1.0, std::pow(10.0, db / 10.0), 1.0};
      const std::uint64_t n = 50 + (rng.next_u64() % 150);
      const auto trace = make_trace(params, n, rng.next_u64());
      for (std::int64_t cap : {1, 2, 3, 7, 20, -1}) {
        DpOptions fast;
        fast.queue_cap = cap;
        DpOptions slow = fast;
        slow.want_modes = true;
        CHECK(dp_offline_optimum(trace, thr, 1.0, fast).delivered_packets ==
              dp_offline_optimum(trace, thr, 1.0, slow).delivered_packets);
      }
    }
  }

  SUBCASE("capped value is monotone in the cap") {
    const SystemParams params{1.0, 1.0, 6.0, 1.0};
    const auto trace = make_trace(params, 600, 5);
    std::uint64_t prev = 0;
    for (std::int64_t cap : {2, 4, 8, 16, 32}) {
      DpOptions opt;
      opt.queue_cap = cap;
      const std::uint64_t v = dp_offline_optimum(trace, thr, 1.0, opt).delivered_packets;
      CHECK(v >= prev);
      prev = v;
    }
    // cap >= horizon reproduces the unrestricted value
    DpOptions full;
    const std::uint64_t exact = dp_offline_optimum(trace, thr, 1.0, full).delivered_packets;
    DpOptions wide;
    wide.queue_cap = 600;
    CHECK(dp_offline_optimum(trace, thr, 1.0, wide).delivered_packets == exact);
  }

  SUBCASE("horizon cap is enforced") {
    const SystemParams params{1.0, 1.0, 10.0, 1.0};
    const auto trace = make_trace(params, 50, 1);
    DpOptions opt;
    opt.horizon_cap = 49;
    CHECK_THROWS_AS(dp_offline_optimum(trace, thr, 1.0, opt), std::invalid_argument);
  }
}
