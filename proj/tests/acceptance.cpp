// Acceptance suite: end-to-end checks of the full pipeline at the reference
// setting (omega1 = omega2 = 1, rate0 = 1). Prints one PASS/FAIL line per
// criterion; the exit code is the number of failures.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "relaysim/analytics.hpp"
#include "relaysim/benchmarks.hpp"
#include "relaysim/oracle.hpp"
#include "relaysim/sweep.hpp"
#include "support/oracles.hpp"
#include "support/quad2d.hpp"

using namespace relaysim;

namespace {

constexpr std::uint64_t kSeed = 20140131;
int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %-34s %s\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  va_list args;
  va_start(args, f);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

SystemParams params_at(double db) { return {1.0, 1.0, db_to_linear(db), 1.0}; }

struct PointResult {
  double db;
  double analytic;
  double seconds;
  ThroughputReport sim;
};

// criteria 1 and 5 share the nine 1e6-slot runs
std::vector<PointResult> simulate_sweep_points() {
  std::vector<PointResult> out;
  for (int db = 0; db <= 40; db += 5) {
    const SystemParams p = params_at(db);
    PointResult r;
    r.db = db;
    r.analytic = max_sum_throughput(analytic_probabilities(p), 1.0);
    RunConfig rc;
    rc.n_slots = 1'000'000;
    rc.warmup = 10'000;
    rc.seed = kSeed;
    rc.stream_index = static_cast<std::uint64_t>(db);
    const auto t0 = std::chrono::steady_clock::now();
    r.sim = run(p, rc);
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  }
  return out;
}

void criterion1(const std::vector<PointResult>& pts) {
  bool pass = true;
  double worst_abs = 0.0, worst_sigma = 0.0, worst_time = 0.0;
  for (const PointResult& r : pts) {
    const double diff = std::abs(r.sim.r_sum - r.analytic);
    const double tol = std::max(3.0 * r.sim.r_sum_stderr, 0.01);
    pass &= diff <= tol && r.seconds < 10.0;
    worst_abs = std::max(worst_abs, diff);
    if (r.sim.r_sum_stderr > 0.0)
      worst_sigma = std::max(worst_sigma, diff / r.sim.r_sum_stderr);
    worst_time = std::max(worst_time, r.seconds);
  }
  report(1, "simulated r_sum vs closed form", pass,
         fmt("max |diff| = %.4f (<= max(3*SE, 0.01)), worst sigma distance %.2f, "
             "max %.2f s/point",
             worst_abs, worst_sigma, worst_time));
}

void criterion2() {
  const SystemParams p = params_at(40.0);
  const std::uint64_t n = 1'000'000;
  RunConfig rc;
  rc.n_slots = n;
  rc.warmup = 10'000;
  rc.seed = kSeed + 2;
  const double proposed = run(p, rc).r_sum;
  const double mabc = simulate_benchmark(Scheme::Mabc, p, n, kSeed + 2, 1).r_sum;
  const double tdbc = simulate_benchmark(Scheme::Tdbc, p, n, kSeed + 2, 2).r_sum;
  const double twoway = simulate_benchmark(Scheme::TwoWay, p, n, kSeed + 2, 3).r_sum;
  const bool pass = proposed >= 0.99 && proposed <= 1.0 && mabc >= 0.99 && mabc <= 1.0 &&
                    tdbc >= 0.66 && tdbc <= 0.67 && twoway >= 0.495 && twoway <= 0.505;
  report(2, "saturation at 40 dB", pass,
         fmt("proposed %.4f mabc %.4f tdbc %.4f twoway %.4f", proposed, mabc, tdbc,
             twoway));
}

double outage_crossing_db(double level, Scheme scheme) {
  // the analytic outage curves are monotone in gamma; bisect on dB
  auto f = [&](double db) {
    const SystemParams p = params_at(db);
    if (scheme == Scheme::Proposed) return system_outage(analytic_probabilities(p));
    return optimize_benchmark(scheme, p).f_sys;
  };
  double lo = 0.0, hi = 45.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion3() {
  bool ordered = true;
  for (int db = 5; db <= 40; db += 5) {
    const SystemParams p = params_at(db);
    const double f_prop = system_outage(analytic_probabilities(p));
    const double f_mabc = optimize_benchmark(Scheme::Mabc, p).f_sys;
    const double f_tdbc = optimize_benchmark(Scheme::Tdbc, p).f_sys;
    ordered &= f_prop < f_mabc && f_mabc < f_tdbc;
  }
  const double gain =
      outage_crossing_db(1e-2, Scheme::Mabc) - outage_crossing_db(1e-2, Scheme::Proposed);
  const bool pass = ordered && gain >= 2.5 && gain <= 5.5;
  report(3, "outage ordering and SNR gain", pass,
         fmt("ordering %s, gain at 1e-2 = %.2f dB (window [2.5, 5.5])",
             ordered ? "ok" : "broken", gain));
}

void criterion4() {
  const SystemParams p = params_at(40.0);
  const Thresholds thr = make_thresholds(p.rate0);
  const double scale = p.gamma * std::min(p.omega1, p.omega2) / thr.gamma_thr;

  const RegionProbabilities probs = analytic_probabilities(p);
  const double f_analytic = system_outage(probs);
  const double analytic_scaled = f_analytic * scale;

  const HighSnrPmax pm = high_snr_pmax(p);
  const double pmax_err = std::abs(pm.exact - probs.p_max());

  // Monte-Carlo at 1e7 samples through the closed-form outage map; the
  // delivered-rate estimator cannot resolve 1e-4 at this horizon (shot noise
  // ~3e-4), so it is checked for consistency at its own resolution.
  Rng rng = Rng::stream(kSeed + 4, 0);
  const RegionProbabilities emp = empirical_probabilities(p, 10'000'000, rng);
  const double mc_scaled = (emp.p_r5 + emp.p_max()) * scale;

  RunConfig rc;
  rc.n_slots = 10'000'000;
  rc.warmup = 100'000;
  rc.seed = kSeed + 4;
  rc.stream_index = 1;
  const ThroughputReport rep = run(p, rc);
  const double rate_noise = 3.0 * std::max(rep.r_sum_stderr, 1e-4) + 1e-3;
  const bool rate_consistent = std::abs(rep.f_sys - f_analytic) <= rate_noise;

  const bool pass = analytic_scaled >= 0.9 && analytic_scaled <= 1.1 &&
                    mc_scaled >= 0.9 && mc_scaled <= 1.1 && pmax_err < 1e-12 &&
                    rate_consistent;
  report(4, "high-SNR asymptote", pass,
         fmt("analytic %.4f, MC(1e7) %.4f (window [0.9, 1.1]), |Pmax err| %.1e, "
             "rate-estimator consistent %s",
             analytic_scaled, mc_scaled, pmax_err, rate_consistent ? "yes" : "no"));
}

void criterion5(const std::vector<PointResult>& pts) {
  bool pass = true;
  double worst_gap = 0.0, worst_starve = 0.0;
  for (const PointResult& r : pts) {
    const double g1 = std::abs(r.sim.r_1r - r.sim.r_r2);
    const double g2 = std::abs(r.sim.r_2r - r.sim.r_r1);
    worst_gap = std::max({worst_gap, g1, g2});
    worst_starve = std::max(worst_starve, r.sim.starvation_rate);
    pass &= g1 < 0.005 && g2 < 0.005 && r.sim.starvation_rate < 0.01;
  }
  report(5, "queue balance and starvation", pass,
         fmt("max |in-out| = %.4f (< 0.005), max starvation = %.4f (< 0.01)",
             worst_gap, worst_starve));
}

std::vector<RegionProbabilities> property_points() {
  Rng rng(kSeed + 6);
  return testsupport::branch_covering_points(rng, 1000);
}

void criterion6(const std::vector<RegionProbabilities>& points) {
  bool pass = true;
  double worst = 0.0;
  bool branch_seen[8] = {};
  Rng rng(kSeed + 66);
  for (const RegionProbabilities& p : points) {
    branch_seen[testsupport::branch_id(identify_branch(p))] = true;
    double sum_ref = -1.0;
    for (double lambda : {0.0, 0.5, 1.0}) {
      DiceTable d;
      try {
        d = build_dice(p, lambda);
      } catch (const std::exception&) {
        pass = false;
        continue;
      }
      const double sums[] = {d.die1[0] + d.die1[1],
                             d.die2[0] + d.die2[1] + d.die2[2],
                             d.die3[0] + d.die3[1] + d.die3[2],
                             d.die4[0] + d.die4[1] + d.die4[2]};
      for (double s : sums) pass &= std::abs(s - 1.0) <= 1e-12;
      const LinkRates r = expected_rates(p, d, 1.0);
      const double c1 = std::abs(r.r_1r - r.r_r2);
      const double c2 = std::abs(r.r_2r - r.r_r1);
      const double thr = std::abs(r.r_1r + r.r_2r - max_sum_throughput(p, 1.0));
      worst = std::max({worst, c1, c2, thr});
      pass &= c1 <= 1e-10 && c2 <= 1e-10 && thr <= 1e-10;
      if (sum_ref < 0.0) sum_ref = r.r_1r + r.r_2r;
      pass &= std::abs(r.r_1r + r.r_2r - sum_ref) <= 1e-12;
    }
  }
  bool covered = true;
  for (bool b : branch_seen) covered &= b;
  pass &= covered;
  report(6, "die table property suite", pass,
         fmt("%zu points, all 8 branches %s, worst violation %.1e", points.size(),
             covered ? "covered" : "MISSING", worst));
}

void criterion7() {
  const double gammas_db[] = {5.0, 15.0, 25.0};
  struct Job {
    double db;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int t = 0; t < 100; ++t) jobs.push_back({gammas_db[t % 3], kSeed + 700 + t});

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> dominance{true};
  std::mutex mu;
  double worst_gap = 0.0, mean_gap = 0.0;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= jobs.size()) return;
      const SystemParams p = params_at(jobs[k].db);
      const Thresholds thr = make_thresholds(p.rate0);
      const RegionProbabilities probs = analytic_probabilities(p);
      const DiceTable dice = build_dice_max_r12(probs);
      const double analytic = max_sum_throughput(probs, 1.0);
      const auto trace = make_trace(p, 10'000, jobs[k].seed);
      const ThroughputReport pol = run_policy_on_trace(trace, p, dice, jobs[k].seed);
      // the policy's own trajectory fits inside this cap, so the capped DP
      // dominates it by construction
      DpOptions opt;
      opt.queue_cap = std::max<std::int64_t>(64, pol.max_queue + 1);
      const DpResult dp = dp_offline_optimum(trace, thr, 1.0, opt);
      if (dp.per_slot_bits < pol.r_sum - 1e-12) dominance = false;
      const double gap = (dp.per_slot_bits - pol.r_sum) / analytic;
      std::lock_guard<std::mutex> lock(mu);
      worst_gap = std::max(worst_gap, gap);
      mean_gap += gap / jobs.size();
    }
  };
  std::thread t1(worker), t2(worker);
  t1.join();
  t2.join();
  // the policy pays O(1/sqrt(N)) finite-horizon tolls (leftover backlog,
  // burn-in starvation), so individual traces scatter around the mean; the
  // ensemble mean is the stable gap statistic
  const bool gap_ok = mean_gap < 0.03;

  // the DP's own oracle: exhaustive enumeration at short horizons
  bool enum_ok = true;
  {
    const SystemParams p = params_at(5.0);
    const Thresholds thr = make_thresholds(p.rate0);
    Rng rng(kSeed + 77);
    for (int trial = 0; trial < 6; ++trial) {
      const std::uint64_t n = 4 + (rng.next_u64() % 5);  // 4..8
      std::vector<ChannelDraw> trace;
      for (std::uint64_t i = 0; i < n; ++i) trace.push_back(draw_gains(rng, p));
      enum_ok &= dp_offline_optimum(trace, thr, 1.0).delivered_packets ==
                 testsupport::enumerate_offline_optimum(trace, thr);
    }
  }

  const bool pass = dominance && gap_ok && enum_ok;
  report(7, "offline DP dominance and tightness", pass,
         fmt("100 traces, dominance %s, mean gap %.2f%% (< 3%%, worst %.2f%%), "
             "enumeration %s",
             dominance ? "ok" : "BROKEN", 100.0 * mean_gap, 100.0 * worst_gap,
             enum_ok ? "exact" : "MISMATCH"));
}

void criterion8(const std::vector<RegionProbabilities>& points) {
  std::uint64_t violations = 0;
  Rng rng(kSeed + 8);
  for (const RegionProbabilities& p : points) {
    const KktReport rep = verify_policy_kkt(p, build_dice(p, rng.uniform()));
    if (!rep.pass) ++violations;
  }
  report(8, "KKT argmax verification", violations == 0,
         fmt("%zu points, %llu violations", points.size(),
             static_cast<unsigned long long>(violations)));
}

void criterion9() {
  bool pass = true;
  double worst_quad = 0.0;
  const SystemParams cases[] = {{1.0, 1.0, 10.0, 1.0}, {2.0, 1.0, 10.0, 1.0},
                                {1.0, 1.0, 100.0, 1.0}};
  for (const SystemParams& p : cases) {
    const RegionProbabilities a = analytic_probabilities(p);
    const testsupport::QuadProbs q = testsupport::quadrature_probabilities(p);
    const double errs[] = {std::abs(a.p_r1 - q.p1), std::abs(a.p_r2 - q.p2),
                           std::abs(a.p_r3 - q.p3), std::abs(a.p_r4 - q.p4),
                           std::abs(a.p_r5 - q.p5)};
    for (double e : errs) {
      worst_quad = std::max(worst_quad, e);
      pass &= e <= 1e-8;
    }
  }
  // Monte-Carlo agreement, symmetric and asymmetric
  int stream = 0;
  for (const SystemParams& p : {SystemParams{1.0, 1.0, 10.0, 1.0},
                                SystemParams{2.0, 1.0, 10.0, 1.0}}) {
    const RegionProbabilities a = analytic_probabilities(p);
    Rng rng = Rng::stream(kSeed + 9, stream++);
    const std::uint64_t n = 1'000'000;
    const RegionProbabilities e = empirical_probabilities(p, n, rng);
    const double pa[] = {a.p_r1, a.p_r2, a.p_r3, a.p_r4, a.p_r5};
    const double pe[] = {e.p_r1, e.p_r2, e.p_r3, e.p_r4, e.p_r5};
    for (int i = 0; i < 5; ++i) {
      const double sigma = std::sqrt(std::max(pa[i] * (1.0 - pa[i]) / double(n), 1e-18));
      pass &= std::abs(pa[i] - pe[i]) <= 3.0 * sigma + 1e-9;
    }
  }
  report(9, "region probability cross-checks", pass,
         fmt("max |closed - quadrature| = %.1e (<= 1e-8), MC within 3 sigma",
             worst_quad));
}

void criterion10() {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "sweep": {"start_db": 0, "stop_db": 40, "step_db": 10},
    "n_slots": 100000, "warmup": 1000, "seed": 77
  })");
  std::ostringstream a, b;
  write_csv(run_sweep(cfg), a);
  write_csv(run_sweep(cfg), b);
  const bool pass = a.str() == b.str() && !a.str().empty();
  report(10, "sweep determinism", pass,
         fmt("%zu bytes, repeated run %s", a.str().size(),
             pass ? "byte-identical" : "DIFFERS"));
}

}  // namespace

int main() {
  std::printf("acceptance suite (omega1 = omega2 = 1, rate0 = 1, seed %llu)\n",
              static_cast<unsigned long long>(kSeed));
  const auto pts = simulate_sweep_points();
  criterion1(pts);
  criterion2();
  criterion3();
  criterion4();
  criterion5(pts);
  const auto points = property_points();
  criterion6(points);
  criterion7();
  criterion8(points);
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures;
}
