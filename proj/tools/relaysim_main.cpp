// Command-line front end: single runs, SNR sweeps, benchmark tables, oracle
// verification and per-slot traces. Science lives in the library; this file
// only parses flags, dispatches and formats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaysim/oracle.hpp"
#include "relaysim/sweep.hpp"

namespace {

using namespace relaysim;

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

struct CommonFlags {
  std::string config_path;
  ExperimentConfig cfg;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file (flags override)");
  cmd->add_option("--omega1", flags.cfg.omega1, "mean fading gain, link 1");
  cmd->add_option("--omega2", flags.cfg.omega2, "mean fading gain, link 2");
  cmd->add_option("--rate0", flags.cfg.rate0, "fixed rate, bits/symbol");
  cmd->add_option("--gamma-db", flags.cfg.gamma_db, "transmit SNR in dB");
  cmd->add_option("--slots", flags.cfg.n_slots, "number of simulated slots");
  cmd->add_option("--warmup", [&flags](const std::vector<std::string>& v) {
    flags.cfg.warmup = std::stoull(v.back());
    return true;
  }, "warmup slots discarded before averaging (default n/100)");
  cmd->add_option("--seed", flags.cfg.seed, "master RNG seed");
  cmd->add_option("--lambda", [&flags](const std::vector<std::string>& v) {
    flags.cfg.fairness = std::stod(v.back());
    return true;
  }, "fairness split in [0,1] (default: maximize r_12)");
  cmd->add_option("--output,-o", flags.cfg.output, "output file (default stdout)");
}

// config file first, then explicit flags on top
void load_config(const CLI::App* cmd, CommonFlags& flags) {
  if (flags.config_path.empty()) return;
  ExperimentConfig base = ExperimentConfig::from_json_file(flags.config_path);
  auto keep = [&](const std::string& flag) { return cmd->count(flag) > 0; };
  if (keep("--omega1")) base.omega1 = flags.cfg.omega1;
  if (keep("--omega2")) base.omega2 = flags.cfg.omega2;
  if (keep("--rate0")) base.rate0 = flags.cfg.rate0;
  if (keep("--gamma-db")) base.gamma_db = flags.cfg.gamma_db;
  if (keep("--slots")) base.n_slots = flags.cfg.n_slots;
  if (keep("--warmup")) base.warmup = flags.cfg.warmup;
  if (keep("--seed")) base.seed = flags.cfg.seed;
  if (keep("--lambda")) base.fairness = flags.cfg.fairness;
  if (keep("--output")) base.output = flags.cfg.output;
  flags.cfg = base;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::ios_base::failure("cannot open output file '" + path + "'");
  return file;
}

int cmd_run(const CommonFlags& flags, bool verbose) {
  const ExperimentConfig& cfg = flags.cfg;
  const SystemParams params = cfg.params_at_db(cfg.gamma_db);
  const RegionProbabilities probs = analytic_probabilities(params);

  RunConfig rc;
  rc.n_slots = cfg.n_slots;
  rc.warmup = cfg.warmup_slots();
  rc.seed = cfg.seed;
  rc.fairness = cfg.fairness;
  const ThroughputReport rep = run(params, rc);

  nlohmann::json j;
  j["gamma_db"] = cfg.gamma_db;
  j["regions"] = {{"p_r1", probs.p_r1}, {"p_r2", probs.p_r2}, {"p_r3", probs.p_r3},
                  {"p_r4", probs.p_r4}, {"p_r5", probs.p_r5}};
  j["analytic"] = {{"r_sum", max_sum_throughput(probs, params.rate0)},
                   {"f_sys", system_outage(probs)}};
  j["simulated"] = {{"r_sum", rep.r_sum},     {"r_sum_stderr", rep.r_sum_stderr},
                    {"f_sys", rep.f_sys},     {"f12", rep.f_12},
                    {"f21", rep.f_21},        {"r_1r", rep.r_1r},
                    {"r_2r", rep.r_2r},       {"r_r1", rep.r_r1},
                    {"r_r2", rep.r_r2},       {"starvation_rate", rep.starvation_rate},
                    {"n_slots", rep.n_slots}};
  if (verbose) {
    RunConfig rc_full = rc;
    rc_full.warmup = 0;
    const ThroughputReport full = run(params, rc_full);
    j["simulated_no_warmup"] = {{"r_sum", full.r_sum}, {"f_sys", full.f_sys}};
  }
  std::ofstream file;
  open_output(cfg.output, file) << j.dump(2) << '\n';
  return 0;
}

int cmd_sweep(CommonFlags& flags) {
  ExperimentConfig& cfg = flags.cfg;
  if (!cfg.sweep_start_db) {  // flag defaults when no config file gave a range
    cfg.sweep_start_db = 0.0;
    cfg.sweep_stop_db = 40.0;
  }
  const std::vector<SweepRow> rows = run_sweep(cfg);
  std::ofstream file;
  write_csv(rows, open_output(cfg.output, file));
  return 0;
}

int cmd_bench(const CommonFlags& flags) {
  const ExperimentConfig& cfg = flags.cfg;
  const SystemParams params = cfg.params_at_db(cfg.gamma_db);
  nlohmann::json j;
  for (Scheme s : {Scheme::TwoWay, Scheme::Tdbc, Scheme::Mabc}) {
    const BenchmarkPlan plan = optimize_benchmark(s, params);
    j[to_string(s)] = {{"r_sum", plan.r_sum},
                       {"f_sys", plan.f_sys},
                       {"fractions", plan.fractions}};
  }
  const RegionProbabilities probs = analytic_probabilities(params);
  j["proposed"] = {{"r_sum", max_sum_throughput(probs, params.rate0)},
                   {"f_sys", system_outage(probs)}};
  std::ofstream file;
  open_output(cfg.output, file) << j.dump(2) << '\n';
  return 0;
}

int cmd_trace(const CommonFlags& flags) {
  const ExperimentConfig& cfg = flags.cfg;
  const SystemParams params = cfg.params_at_db(cfg.gamma_db);
  std::ofstream file;
  std::ostream& out = open_output(cfg.output, file);
  out << "slot,gamma1,gamma2,region,mode,q1,q2,delivered12,delivered21,starved\n";
  RunConfig rc;
  rc.n_slots = cfg.n_slots;
  rc.warmup = cfg.warmup_slots();
  rc.seed = cfg.seed;
  rc.fairness = cfg.fairness;
  rc.slot_sink = [&out](const SlotRecord& rec, const ChannelDraw& draw,
                        const RelayBuffers& buffers) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%llu,%.10g,%.10g,%s,%s,%lld,%lld,%d,%d,%d\n",
                  static_cast<unsigned long long>(rec.index), draw.snr1, draw.snr2,
                  to_string(rec.region), to_string(rec.mode),
                  static_cast<long long>(buffers.q1), static_cast<long long>(buffers.q2),
                  rec.delivered_12 ? 1 : 0, rec.delivered_21 ? 1 : 0,
                  rec.starved ? 1 : 0);
    out << buf;
  };
  run(params, rc);
  return 0;
}

// Self-contained oracle suites; exit 0 iff everything passes.
int cmd_verify(const CommonFlags& flags) {
  const ExperimentConfig& cfg = flags.cfg;
  nlohmann::json j;
  bool pass = true;
  Rng rng(cfg.seed ^ 0x5eedULL);

  // KKT argmax check over randomized region statistics
  {
    std::uint64_t violations = 0, points = 0, branch_seen[8] = {};
    while (points < 1000) {
      double v[5], sum = 0.0;
      for (double& x : v) sum += (x = -std::log(1.0 - rng.uniform()));
      RegionProbabilities probs{v[0] / sum, v[1] / sum, v[2] / sum, v[3] / sum,
                                v[4] / sum};
      const DiceTable dice = build_dice(probs, rng.uniform());
      const KktReport rep = verify_policy_kkt(probs, dice);
      if (!rep.pass) ++violations;
      branch_seen[(rep.branch.p3_le_p4 ? 0 : 4) + rep.branch.cell - 1]++;
      ++points;
    }
    bool all_branches = true;
    for (std::uint64_t c : branch_seen) all_branches &= c > 0;
    j["kkt"] = {{"points", points}, {"violations", violations},
                {"all_branches_covered", all_branches}};
    pass &= violations == 0 && all_branches;
  }

  // DP dominance over the policy on shared traces
  {
    const SystemParams params = cfg.params_at_db(cfg.gamma_db);
    const Thresholds thr = make_thresholds(params.rate0);
    const RegionProbabilities probs = analytic_probabilities(params);
    const DiceTable dice = build_dice_max_r12(probs);
    bool dominated = true;
    double max_gap = 0.0;
    for (int t = 0; t < 5; ++t) {
      const auto trace = make_trace(params, 4000, cfg.seed + 100 + t);
      const ThroughputReport pol = run_policy_on_trace(trace, params, dice, cfg.seed + t);
      DpOptions opt;
      opt.queue_cap = std::max<std::int64_t>(64, pol.max_queue + 1);
      const DpResult dp = dp_offline_optimum(trace, thr, params.rate0, opt);
      dominated &= dp.per_slot_bits >= pol.r_sum - 1e-12;
      max_gap = std::max(max_gap, dp.per_slot_bits - pol.r_sum);
    }
    j["dp"] = {{"dominates_policy", dominated}, {"max_gap_bits_per_slot", max_gap}};
    pass &= dominated;
  }

  // benchmark closed forms against the grid optimizer
  {
    double worst = 0.0;
    for (Scheme s : {Scheme::TwoWay, Scheme::Tdbc, Scheme::Mabc}) {
      for (double db : {0.0, 10.0, 25.0}) {
        const SystemParams p = cfg.params_at_db(db);
        worst = std::max(worst, std::abs(optimize_benchmark(s, p).r_sum -
                                         optimize_benchmark_grid(s, p).r_sum));
      }
    }
    j["benchmark_grid"] = {{"max_abs_gap", worst}};
    pass &= worst < 1e-5;
  }

  // analytic region probabilities against Monte-Carlo, 3 sigma
  {
    const SystemParams params = cfg.params_at_db(cfg.gamma_db);
    const RegionProbabilities a = analytic_probabilities(params);
    Rng stream = Rng::stream(cfg.seed, 7);
    const std::uint64_t n = 1'000'000;
    const RegionProbabilities e = empirical_probabilities(params, n, stream);
    const double pa[] = {a.p_r1, a.p_r2, a.p_r3, a.p_r4, a.p_r5};
    const double pe[] = {e.p_r1, e.p_r2, e.p_r3, e.p_r4, e.p_r5};
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      const double sigma = std::sqrt(std::max(pa[i] * (1 - pa[i]) / n, 1e-18));
      ok &= std::abs(pa[i] - pe[i]) <= 3.0 * sigma + 1e-9;
    }
    j["regions_mc"] = {{"within_3_sigma", ok}};
    pass &= ok;
  }

  j["pass"] = pass;
  std::ofstream file;
  open_output(cfg.output, file) << j.dump(2) << '\n';
  return pass ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"buffer-aided bidirectional relay simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool verbose = false;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate a single SNR point");
  add_common_flags(run_cmd, flags);
  run_cmd->add_flag("-v,--verbose", verbose, "also report without warmup");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "analytic + simulated CSV over an SNR range");
  add_common_flags(sweep_cmd, flags);
  double start_db = 0.0, stop_db = 40.0, step_db = 5.0;
  sweep_cmd->add_option("--start-db", start_db, "sweep start (dB)");
  sweep_cmd->add_option("--stop-db", stop_db, "sweep stop (dB)");
  sweep_cmd->add_option("--step-db", step_db, "sweep step (dB)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark analytics at one SNR point");
  add_common_flags(bench_cmd, flags);

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the oracle suites");
  add_common_flags(verify_cmd, flags);

  CLI::App* trace_cmd = app.add_subcommand("trace", "per-slot CSV trace");
  add_common_flags(trace_cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    load_config(cmd, flags);
    if (cmd == sweep_cmd) {
      if (cmd->count("--start-db") || !flags.cfg.sweep_start_db)
        flags.cfg.sweep_start_db = start_db;
      if (cmd->count("--stop-db") || !flags.cfg.sweep_stop_db)
        flags.cfg.sweep_stop_db = stop_db;
      if (cmd->count("--step-db")) flags.cfg.sweep_step_db = step_db;
      return cmd_sweep(flags);
    }
    flags.cfg.validate();
    if (cmd == run_cmd) return cmd_run(flags, verbose);
    if (cmd == bench_cmd) return cmd_bench(flags);
    if (cmd == verify_cmd) return cmd_verify(flags);
    if (cmd == trace_cmd) return cmd_trace(flags);
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
