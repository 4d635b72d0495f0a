#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fddmoea/benchmarks.hpp"
#include "fddmoea/federation.hpp"
#include "fddmoea/moea.hpp"
#include "fddmoea/surrogate.hpp"

namespace fddmoea {

/// Everything needed to reproduce an experiment. Defaults are the standard
/// settings: N=10, lambda=0.9, p_f=0.03, E=20, eta=0.06, B=1, m=5, R=24.
struct ExperimentConfig {
  Family family = Family::dtlz2;
  std::size_t objectives = 3;
  std::size_t dims = 10;
  double dtlz4_alpha = 100.0;
  OptimizerKind optimizer = OptimizerKind::nsga2;

  std::size_t clients = 10;
  double participation = 0.9;
  double failure_prob = 0.03;
  std::size_t epochs = 20;
  double learning_rate = 0.06;
  std::size_t batch_size = 1;
  KernelForm kernel = KernelForm::squared;
  double alpha = 2.0;

  std::size_t per_round = 5;
  std::size_t rounds = 24;
  std::size_t population = 50;
  std::size_t generations = 50;
  std::size_t max_restarts = 5;
  std::size_t archive_seeds = 10;

  std::size_t runs = 20;
  std::uint64_t seed = 1;
  std::size_t reference_points = 10000;
  std::string out;

  /// Sets one option from its flag name without dashes ("failure-prob", ...).
  void set(std::string_view key, std::string_view value);

  /// Throws std::invalid_argument describing the first invalid setting.
  void validate() const;

  Problem problem() const;
  FederationConfig federation() const;
};

/// Applies `key = value` lines (blank lines and '#' comments ignored) on top of `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

struct ConvergenceRecord {
  std::size_t run = 0;
  std::size_t iter = 0;
  std::size_t fes = 0;
  double igd = 0.0;
  double ms = 0.0;

  bool operator==(const ConvergenceRecord&) const = default;
};

struct RunResult {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::vector<ConvergenceRecord> records;
  std::vector<RoundState> rounds;

  double final_igd() const { return records.back().igd; }
  std::size_t final_fes() const { return records.back().fes; }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  double mean_igd = 0.0;
  double std_igd = 0.0;

  std::vector<ConvergenceRecord> records() const;
};

struct RunOptions {
  std::size_t workers = 1;
  // Wall-clock milliseconds are written to the `ms` column only when enabled;
  // otherwise the column is zero and outputs are byte-reproducible.
  bool timing = false;
};

/// IGD of the non-dominated subset of `archive_objectives`.
double archive_igd(const std::vector<Vector>& archive_objectives, const std::vector<Vector>& reference);

/// One run: seed = config.seed + run. Records iteration 0 (initial design) and every round.
RunResult run_single(const ExperimentConfig& config, std::size_t run, const std::vector<Vector>& reference,
                     bool timing = false);

/// All runs (in parallel up to `workers`), merged in run order, plus mean and
/// sample standard deviation of the final IGD values.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

enum class SweepParameter { participation, failure_prob };

SweepParameter parse_sweep_parameter(std::string_view name);
std::string to_string(SweepParameter parameter);

struct SweepResult {
  SweepParameter parameter;
  std::vector<double> values;
  std::vector<ExperimentResult> results;
};

SweepResult sweep(const ExperimentConfig& config, SweepParameter parameter, const std::vector<double>& values,
                  const RunOptions& options = {});

/// `run,iter,fes,igd,ms` with a header line; values round-trip exactly.
void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> read_records_csv(std::istream& in);

/// {problem, M, d, optimizer, mean_igd, std_igd, runs: [final IGD per run], ...}
std::string summary_json(const ExperimentResult& result);

/// Round-by-round log: contributors, weights, participants, delivery bitmap and FE count.
std::string event_log_json(const ExperimentResult& result);

/// One row per swept value: parameter,value,problem,M,d,optimizer,runs,mean_igd,std_igd.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// "mean (std)" in the style of the result tables, e.g. "0.1738 (1.9e-02)".
std::string format_mean_std(double mean, double std);

/// Writes convergence.csv, summary.json and events.json into `dir`.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result);

}  // namespace fddmoea
