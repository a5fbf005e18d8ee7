#include "relaysim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace relaysim {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void ExperimentConfig::validate() const {
  params_at_db(gamma_db).validate();
  if (n_slots == 0) throw std::invalid_argument("config: n_slots must be >= 1");
  if (warmup && *warmup >= n_slots)
    throw std::invalid_argument("config: warmup must be < n_slots");
  if (fairness && !(*fairness >= 0.0 && *fairness <= 1.0))
    throw std::invalid_argument("config: fairness must be in [0,1]");
  if (sweep_start_db || sweep_stop_db) {
    if (!sweep_start_db || !sweep_stop_db)
      throw std::invalid_argument("config: sweep needs both start and stop");
    if (!(sweep_step_db > 0.0))
      throw std::invalid_argument("config: sweep step must be > 0");
    if (*sweep_stop_db < *sweep_start_db)
      throw std::invalid_argument("config: sweep stop must be >= start");
  }
  if (schemes.empty()) throw std::invalid_argument("config: schemes must be non-empty");
  // duplicate schemes would emit rows with equal sort keys in random order
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t j = i + 1; j < schemes.size(); ++j)
      if (schemes[i] == schemes[j])
        throw std::invalid_argument("config: schemes must be distinct");
}

SystemParams ExperimentConfig::params_at_db(double db) const {
  return SystemParams{omega1, omega2, db_to_linear(db), rate0};
}

std::uint64_t ExperimentConfig::warmup_slots() const {
  return warmup ? *warmup : n_slots / 100;
}

std::vector<double> ExperimentConfig::sweep_points_db() const {
  std::vector<double> points;
  if (!sweep_start_db) {
    points.push_back(gamma_db);
    return points;
  }
  for (double db = *sweep_start_db; db <= *sweep_stop_db + 1e-9; db += sweep_step_db)
    points.push_back(db);
  return points;
}

namespace {

Scheme scheme_from_name(const std::string& name) {
  if (name == "proposed") return Scheme::Proposed;
  if (name == "twoway") return Scheme::TwoWay;
  if (name == "tdbc") return Scheme::Tdbc;
  if (name == "mabc") return Scheme::Mabc;
  throw std::invalid_argument("config: unknown scheme '" + name + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "omega1") cfg.omega1 = value.get<double>();
      else if (key == "omega2") cfg.omega2 = value.get<double>();
      else if (key == "rate0") cfg.rate0 = value.get<double>();
      else if (key == "gamma_db") cfg.gamma_db = value.get<double>();
      else if (key == "sweep") {
        for (const auto& [skey, sval] : value.items()) {
          if (skey == "start_db") cfg.sweep_start_db = sval.get<double>();
          else if (skey == "stop_db") cfg.sweep_stop_db = sval.get<double>();
          else if (skey == "step_db") cfg.sweep_step_db = sval.get<double>();
          else throw std::invalid_argument("config: unknown key 'sweep." + skey + "'");
        }
      } else if (key == "n_slots") cfg.n_slots = value.get<std::uint64_t>();
      else if (key == "warmup") cfg.warmup = value.get<std::uint64_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "lambda") cfg.fairness = value.get<double>();
      else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& s : value) cfg.schemes.push_back(scheme_from_name(s.get<std::string>()));
      } else if (key == "output") cfg.output = value.get<std::string>();
      else if (key == "trace") cfg.trace = value.get<bool>();
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad value type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::vector<double> points = config.sweep_points_db();

  struct Task {
    double db;
    std::size_t point_index;
    Scheme scheme;
    std::size_t scheme_slot;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t s = 0; s < config.schemes.size(); ++s)
      tasks.push_back({points[p], p, config.schemes[s], s});

  auto run_task = [&](const Task& task) {
    const SystemParams params = config.params_at_db(task.db);
    SweepRow row;
    row.gamma_db = task.db;
    row.scheme = task.scheme;
    row.n_slots = config.n_slots;
    row.seed = config.seed;
    // one RNG stream per (point, scheme) so workers never share state
    const std::uint64_t stream = task.point_index * 16 + task.scheme_slot;
    if (task.scheme == Scheme::Proposed) {
      const RegionProbabilities probs = analytic_probabilities(params);
      row.r_sum_analytic = max_sum_throughput(probs, params.rate0);
      row.f_sys_analytic = system_outage(probs);
      RunConfig rc;
      rc.n_slots = config.n_slots;
      rc.warmup = config.warmup_slots();
      rc.seed = config.seed;
      rc.stream_index = stream;
      rc.fairness = config.fairness;
      const ThroughputReport rep = run(params, rc);
      row.r_sum_sim = rep.r_sum;
      row.r_sum_stderr = rep.r_sum_stderr;
      row.f_sys_sim = rep.f_sys;
      row.f12 = rep.f_12;
      row.f21 = rep.f_21;
      row.starvation_rate = rep.starvation_rate;
    } else {
      const BenchmarkPlan plan = optimize_benchmark(task.scheme, params);
      row.r_sum_analytic = plan.r_sum;
      row.f_sys_analytic = plan.f_sys;
      const ThroughputReport rep =
          simulate_benchmark(task.scheme, params, config.n_slots, config.seed, stream);
      row.r_sum_sim = rep.r_sum;
      row.r_sum_stderr = rep.r_sum_stderr;
      row.f_sys_sim = rep.f_sys;
      row.f12 = rep.f_12;
      row.f21 = rep.f_21;
      row.starvation_rate = rep.starvation_rate;
    }
    return row;
  };

  // small worker pool; rows are re-sorted afterwards so scheduling order
  // cannot leak into the output
  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                     tasks.size()));
  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t k = cursor.fetch_add(1);
        if (k >= tasks.size()) return;
        try {
          rows[k] = run_task(tasks[k]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);

  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.gamma_db != b.gamma_db) return a.gamma_db < b.gamma_db;
    return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);
  });
  return rows;
}

std::string csv_header() {
  return "gamma_db,scheme,r_sum_analytic,r_sum_sim,r_sum_stderr,f_sys_analytic,"
         "f_sys_sim,f12,f21,starvation_rate,n_slots,seed";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string to_csv_row(const SweepRow& r) {
  std::ostringstream out;
  out << fmt(r.gamma_db) << ',' << to_string(r.scheme) << ',' << fmt(r.r_sum_analytic)
      << ',' << fmt(r.r_sum_sim) << ',' << fmt(r.r_sum_stderr) << ','
      << fmt(r.f_sys_analytic) << ',' << fmt(r.f_sys_sim) << ',' << fmt(r.f12) << ','
      << fmt(r.f21) << ',' << fmt(r.starvation_rate) << ',' << r.n_slots << ','
      << r.seed;
  return out.str();
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << csv_header() << '\n';
  for (const SweepRow& row : rows) out << to_csv_row(row) << '\n';
}

}  // namespace relaysim
