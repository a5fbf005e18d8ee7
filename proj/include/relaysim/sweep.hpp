#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relaysim/analytics.hpp"
#include "relaysim/benchmarks.hpp"

namespace relaysim {

/// One experiment description. Gamma enters in dB here and is converted to
/// linear exactly once, at parse time; everything below the CLI boundary is
/// linear.
struct ExperimentConfig {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double rate0 = 1.0;
  double gamma_db = 10.0;              ///< single-point subcommands
  std::optional<double> sweep_start_db;
  std::optional<double> sweep_stop_db;
  double sweep_step_db = 5.0;
  std::uint64_t n_slots = 1'000'000;
  std::optional<std::uint64_t> warmup;  ///< default: n_slots / 100
  std::uint64_t seed = 1;
  std::optional<double> fairness;       ///< absent: maximize r_12
  std::vector<Scheme> schemes = {Scheme::Proposed, Scheme::TwoWay, Scheme::Tdbc,
                                 Scheme::Mabc};
  std::string output;                   ///< empty: stdout
  bool trace = false;

  void validate() const;
  SystemParams params_at_db(double db) const;
  std::uint64_t warmup_slots() const;
  std::vector<double> sweep_points_db() const;

  /// Strict JSON ingestion: unknown keys are rejected.
  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

/// One output row of the sweep table.
struct SweepRow {
  double gamma_db = 0.0;
  Scheme scheme = Scheme::Proposed;
  double r_sum_analytic = 0.0;
  double r_sum_sim = 0.0;
  double r_sum_stderr = 0.0;
  double f_sys_analytic = 0.0;
  double f_sys_sim = 0.0;
  double f12 = 0.0;
  double f21 = 0.0;
  double starvation_rate = 0.0;
  std::uint64_t n_slots = 0;
  std::uint64_t seed = 0;
};

/// Analytic + simulated results for every (gamma, scheme) pair, computed on a
/// small worker pool and returned sorted by (gamma, scheme) so parallelism
/// never changes the output bytes.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

std::string csv_header();
std::string to_csv_row(const SweepRow& row);
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);

double db_to_linear(double db);

}  // namespace relaysim
