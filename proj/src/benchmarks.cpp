#include "relaysim/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "accumulator.hpp"

namespace relaysim {
namespace {

// Buffered-flow sum throughput of a schedule, per unit rate0. Broadcast slots
// drain both buffers together (mode M6), so its success probability is e1*e2
// and the two directions share the bottleneck.
double flow_value(Scheme scheme, const std::vector<double>& f, const LinkSuccess& ls) {
  switch (scheme) {
    case Scheme::TwoWay:
      return std::min(f[0] * ls.e1, f[1] * ls.e2) + std::min(f[2] * ls.e2, f[3] * ls.e1);
    case Scheme::Tdbc:
      return 2.0 * std::min({f[0] * ls.e1, f[1] * ls.e2, f[2] * ls.e1 * ls.e2});
    case Scheme::Mabc:
      return 2.0 * std::min(f[0] * ls.p_mac, f[1] * ls.e1 * ls.e2);
    default:
      throw std::invalid_argument("flow_value: not a benchmark scheme");
  }
}

BenchmarkPlan make_plan(Scheme scheme, const SystemParams& params,
                        std::vector<double> fractions) {
  const LinkSuccess ls = link_success_probs(params);
  BenchmarkPlan plan;
  plan.scheme = scheme;
  switch (scheme) {
    case Scheme::TwoWay:
      plan.phase_modes = {Mode::M1, Mode::M5, Mode::M2, Mode::M4};
      break;
    case Scheme::Tdbc:
      plan.phase_modes = {Mode::M1, Mode::M2, Mode::M6};
      break;
    case Scheme::Mabc:
      plan.phase_modes = {Mode::M3, Mode::M6};
      break;
    default:
      throw std::invalid_argument("optimize_benchmark: unknown scheme");
  }
  plan.fractions = std::move(fractions);
  plan.r_sum = flow_value(scheme, plan.fractions, ls) * params.rate0;
  plan.f_sys = 1.0 - plan.r_sum / params.rate0;
  return plan;
}

}  // namespace

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Proposed: return "proposed";
    case Scheme::TwoWay: return "twoway";
    case Scheme::Tdbc: return "tdbc";
    case Scheme::Mabc: return "mabc";
  }
  return "?";
}

LinkSuccess link_success_probs(const SystemParams& params) {
  params.validate();
  const Thresholds thr = make_thresholds(params.rate0);
  LinkSuccess ls;
  ls.e1 = std::exp(-thr.gamma_thr / (params.omega1 * params.gamma));
  ls.e2 = std::exp(-thr.gamma_thr / (params.omega2 * params.gamma));
  ls.p_mac = analytic_probabilities(params).p_r1;
  return ls;
}

BenchmarkPlan optimize_benchmark(Scheme scheme, const SystemParams& params) {
  const LinkSuccess ls = link_success_probs(params);
  const double e1 = ls.e1, e2 = ls.e2, bc = e1 * e2;
  switch (scheme) {
    case Scheme::TwoWay: {
      // per direction, flow balance a*e1 = b*e2; the direction split is flat,
      // so take it even
      const double denom = e1 + e2;
      return make_plan(scheme, params,
                       {0.5 * e2 / denom, 0.5 * e1 / denom, 0.5 * e1 / denom,
                        0.5 * e2 / denom});
    }
    case Scheme::Tdbc: {
      // equalize all three bottlenecks: t1*e1 = t2*e2 = tb*e1*e2
      const double k = 1.0 / (1.0 / e1 + 1.0 / e2 + 1.0 / bc);
      return make_plan(scheme, params, {k / e1, k / e2, k / bc});
    }
    case Scheme::Mabc: {
      // p_mac < e1*e2 always, so the balance point is the maximum
      const double tau = bc / (ls.p_mac + bc);
      return make_plan(scheme, params, {tau, 1.0 - tau});
    }
    default:
      throw std::invalid_argument("optimize_benchmark: unknown scheme");
  }
}

BenchmarkPlan optimize_benchmark_grid(Scheme scheme, const SystemParams& params) {
  const LinkSuccess ls = link_success_probs(params);
  const int n_free = scheme == Scheme::TwoWay ? 3 : scheme == Scheme::Tdbc ? 2 : 1;

  std::vector<double> best;
  double best_val = -1.0;
  auto consider = [&](std::vector<double> f) {
    double tail = 1.0 - std::accumulate(f.begin(), f.end(), 0.0);
    if (tail < -1e-12) return;
    f.push_back(std::max(0.0, tail));
    const double v = flow_value(scheme, f, ls);
    if (v > best_val) {
      best_val = v;
      best = std::move(f);
    }
  };

  // coarse pass then shrinking local scans around the incumbent
  double step = 0.01;
  std::vector<double> lo(n_free, 0.0), hi(n_free, 1.0);
  while (step >= 1e-6 / 2) {
    std::vector<double> f(n_free);
    std::vector<int> idx(n_free, 0);
    std::vector<int> count(n_free);
    for (int d = 0; d < n_free; ++d)
      count[d] = static_cast<int>(std::floor((hi[d] - lo[d]) / step)) + 1;
    // dense scan of the simplex box [lo, hi]
    bool done = false;
    while (!done) {
      double sum = 0.0;
      bool valid = true;
      for (int d = 0; d < n_free; ++d) {
        f[d] = lo[d] + idx[d] * step;
        sum += f[d];
        if (sum > 1.0 + 1e-12) {
          valid = false;
          break;
        }
      }
      if (valid) consider(f);
      for (int d = 0;; ++d) {
        if (d == n_free) {
          done = true;
          break;
        }
        if (++idx[d] < count[d]) break;
        idx[d] = 0;
      }
    }
    for (int d = 0; d < n_free; ++d) {
      lo[d] = std::max(0.0, best[d] - 2.0 * step);
      hi[d] = std::min(1.0, best[d] + 2.0 * step);
    }
    step *= 0.1;
  }
  return make_plan(scheme, params, std::move(best));
}

ThroughputReport simulate_benchmark(Scheme scheme, const SystemParams& params,
                                    std::uint64_t n_slots, std::uint64_t seed,
                                    std::uint64_t stream_index) {
  if (n_slots == 0)
    throw std::invalid_argument("simulate_benchmark: n_slots must be >= 1");
  const BenchmarkPlan plan = optimize_benchmark(scheme, params);
  const Thresholds thr = make_thresholds(params.rate0);

  // largest-remainder apportionment of slots to phases
  const std::size_t n_phases = plan.fractions.size();
  std::vector<std::uint64_t> counts(n_phases);
  std::vector<std::pair<double, std::size_t>> remainders(n_phases);
  std::uint64_t assigned = 0;
  for (std::size_t p = 0; p < n_phases; ++p) {
    const double exact = plan.fractions[p] * static_cast<double>(n_slots);
    counts[p] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += counts[p];
    remainders[p] = {counts[p] - exact, p};  // ascending = largest remainder first
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::uint64_t r = 0; r < n_slots - assigned; ++r)
    counts[remainders[r % n_phases].second]++;

  Rng rng = Rng::stream(seed, stream_index);
  RelayBuffers buffers;
  detail::Accumulator acc(n_slots);
  std::uint64_t i = 0;
  for (std::size_t p = 0; p < n_phases; ++p) {
    for (std::uint64_t k = 0; k < counts[p]; ++k, ++i) {
      const ChannelDraw draw = draw_gains(rng, params);
      SlotRecord rec = step(buffers, draw, plan.phase_modes[p], thr);
      rec.index = i;
      acc.add(rec, buffers);
    }
  }
  return acc.report(params.rate0, buffers);
}

}  // namespace relaysim
