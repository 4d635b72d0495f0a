#include "fddmoea/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "fddmoea/metrics.hpp"

namespace fddmoea {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string value = trim(text);
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("invalid value '" + value + "' for " + std::string(key));
  }
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  using std::size_t;
  if (key == "problem") family = parse_family(trim(value));
  else if (key == "objectives") objectives = parse_number<size_t>(key, value);
  else if (key == "dims") dims = parse_number<size_t>(key, value);
  else if (key == "dtlz4-alpha") dtlz4_alpha = parse_number<double>(key, value);
  else if (key == "optimizer") optimizer = parse_optimizer(trim(value));
  else if (key == "clients") clients = parse_number<size_t>(key, value);
  else if (key == "participation") participation = parse_number<double>(key, value);
  else if (key == "failure-prob") failure_prob = parse_number<double>(key, value);
  else if (key == "epochs") epochs = parse_number<size_t>(key, value);
  else if (key == "learning-rate") learning_rate = parse_number<double>(key, value);
  else if (key == "batch-size") batch_size = parse_number<size_t>(key, value);
  else if (key == "kernel") kernel = parse_kernel(trim(value));
  else if (key == "alpha") alpha = parse_number<double>(key, value);
  else if (key == "per-round") per_round = parse_number<size_t>(key, value);
  else if (key == "rounds") rounds = parse_number<size_t>(key, value);
  else if (key == "population") population = parse_number<size_t>(key, value);
  else if (key == "generations") generations = parse_number<size_t>(key, value);
  else if (key == "max-restarts") max_restarts = parse_number<size_t>(key, value);
  else if (key == "archive-seeds") archive_seeds = parse_number<size_t>(key, value);
  else if (key == "runs") runs = parse_number<size_t>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "reference-points") reference_points = parse_number<size_t>(key, value);
  else if (key == "out") out = trim(value);
  else throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
  if (objectives < 2) throw std::invalid_argument("objectives must be at least 2");
  if (dims < objectives) throw std::invalid_argument("dims must be at least the number of objectives");
  if (clients == 0) throw std::invalid_argument("clients must be at least 1");
  if (!(participation > 0.0 && participation <= 1.0)) throw std::invalid_argument("participation must be in (0, 1]");
  if (!(failure_prob >= 0.0 && failure_prob < 1.0)) throw std::invalid_argument("failure-prob must be in [0, 1)");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning-rate must be finite and non-negative");
  }
  if (batch_size == 0) throw std::invalid_argument("batch-size must be at least 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (!(dtlz4_alpha > 0.0)) throw std::invalid_argument("dtlz4-alpha must be positive");
  if (per_round == 0) throw std::invalid_argument("per-round must be at least 1");
  if (population < 2) throw std::invalid_argument("population must be at least 2");
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  if (reference_points < objectives) throw std::invalid_argument("reference-points must be at least the number of objectives");
}

Problem ExperimentConfig::problem() const { return Problem(family, objectives, dims, dtlz4_alpha); }

FederationConfig ExperimentConfig::federation() const {
  FederationConfig f;
  f.clients = clients;
  f.participation = participation;
  f.failure_prob = failure_prob;
  f.per_round = per_round;
  f.training.epochs = epochs;
  f.training.learning_rate = learning_rate;
  f.training.batch_size = batch_size;
  f.training.kernel = kernel;
  f.alpha = alpha;
  f.max_restarts = max_restarts;
  f.archive_seeds = archive_seeds;
  f.moea.kind = optimizer;
  f.moea.nsga2.population = population;
  f.moea.nsga2.generations = generations;
  f.moea.rvea.generations = generations;
  return f;
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    base.set(trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  return parse_config(in, std::move(base));
}

std::vector<ConvergenceRecord> ExperimentResult::records() const {
  std::vector<ConvergenceRecord> all;
  for (const auto& r : runs) all.insert(all.end(), r.records.begin(), r.records.end());
  return all;
}

double archive_igd(const std::vector<Vector>& archive_objectives, const std::vector<Vector>& reference) {
  return igd(nondominated_filter(archive_objectives), reference);
}

RunResult run_single(const ExperimentConfig& config, std::size_t run, const std::vector<Vector>& reference,
                     bool timing) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed_ms = [&] {
    return timing ? std::chrono::duration<double, std::milli>(clock::now() - start).count() : 0.0;
  };

  RunResult result;
  result.run = run;
  result.seed = config.seed + run;
  Simulation sim(config.problem(), config.federation(), result.seed);
  result.records.push_back({run, 0, sim.fes(), archive_igd(sim.archive().y.to_rows(), reference), elapsed_ms()});
  for (std::size_t r = 1; r <= config.rounds; ++r) {
    RoundState state = sim.run_round();
    result.records.push_back(
        {run, r, state.fes, archive_igd(sim.archive().y.to_rows(), reference), elapsed_ms()});
    result.rounds.push_back(std::move(state));
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto reference = config.problem().sample_pareto_front(config.reference_points);

  ExperimentResult result;
  result.config = config;
  result.runs.resize(config.runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t run = next++; run < config.runs; run = next++) {
      try {
        result.runs[run] = run_single(config, run, reference, options.timing);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, config.runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Vector finals;
  for (const auto& r : result.runs) finals.push_back(r.final_igd());
  const double n = static_cast<double>(finals.size());
  result.mean_igd = std::accumulate(finals.begin(), finals.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : finals) ss += (v - result.mean_igd) * (v - result.mean_igd);
  result.std_igd = finals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return result;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "participation" || name == "lambda") return SweepParameter::participation;
  if (name == "failure-prob" || name == "pf") return SweepParameter::failure_prob;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "', expected participation|failure-prob");
}

std::string to_string(SweepParameter parameter) {
  return parameter == SweepParameter::participation ? "participation" : "failure-prob";
}

SweepResult sweep(const ExperimentConfig& config, SweepParameter parameter, const std::vector<double>& values,
                  const RunOptions& options) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  // Validate every point before spending time on any of them.
  std::vector<ExperimentConfig> configs;
  for (double v : values) {
    ExperimentConfig c = config;
    (parameter == SweepParameter::participation ? c.participation : c.failure_prob) = v;
    c.validate();
    configs.push_back(std::move(c));
  }
  SweepResult out{parameter, values, {}};
  for (const auto& c : configs) out.results.push_back(run_experiment(c, options));
  return out;
}

void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
  out << "run,iter,fes,igd,ms\n";
  for (const auto& r : records) {
    out << r.run << ',' << r.iter << ',' << r.fes << ',' << fmt_double(r.igd) << ',' << fmt_double(r.ms) << '\n';
  }
}

std::vector<ConvergenceRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "run,iter,fes,igd,ms") {
    throw std::invalid_argument("read_records_csv: missing header");
  }
  std::vector<ConvergenceRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw std::invalid_argument("read_records_csv: expected 5 columns");
    records.push_back({parse_number<std::size_t>("run", cells[0]), parse_number<std::size_t>("iter", cells[1]),
                       parse_number<std::size_t>("fes", cells[2]), parse_number<double>("igd", cells[3]),
                       parse_number<double>("ms", cells[4])});
  }
  return records;
}

std::string format_mean_std(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5g (%.1e)", mean, std);
  return buf;
}

std::string summary_json(const ExperimentResult& result) {
  const auto& c = result.config;
  nlohmann::ordered_json j;
  j["problem"] = to_string(c.family);
  j["M"] = c.objectives;
  j["d"] = c.dims;
  j["optimizer"] = to_string(c.optimizer);
  j["mean_igd"] = result.mean_igd;
  j["std_igd"] = result.std_igd;
  j["table"] = format_mean_std(result.mean_igd, result.std_igd);
  auto finals = nlohmann::json::array();
  auto fes = nlohmann::json::array();
  for (const auto& r : result.runs) {
    finals.push_back(r.final_igd());
    fes.push_back(r.final_fes());
  }
  j["runs"] = finals;
  j["final_fes"] = fes;
  j["clients"] = c.clients;
  j["participation"] = c.participation;
  j["failure_prob"] = c.failure_prob;
  j["rounds"] = c.rounds;
  j["per_round"] = c.per_round;
  j["seed"] = c.seed;
  return j.dump(2);
}

std::string event_log_json(const ExperimentResult& result) {
  auto runs = nlohmann::ordered_json::array();
  for (const auto& r : result.runs) {
    auto rounds = nlohmann::ordered_json::array();
    for (const auto& s : r.rounds) {
      std::string bitmap;
      for (bool b : s.delivered) bitmap += b ? '1' : '0';
      nlohmann::ordered_json e;
      e["round"] = s.round;
      e["contributors"] = s.contributors;
      e["weights"] = s.weights;
      e["participants"] = s.participants;
      e["delivery"] = bitmap;
      e["fes"] = s.fes;
      rounds.push_back(std::move(e));
    }
    nlohmann::ordered_json jr;
    jr["run"] = r.run;
    jr["seed"] = r.seed;
    jr["rounds"] = std::move(rounds);
    runs.push_back(std::move(jr));
  }
  return runs.dump(2);
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "parameter,value,problem,M,d,optimizer,runs,mean_igd,std_igd\n";
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    const auto& r = result.results[i];
    out << to_string(result.parameter) << ',' << fmt_double(result.values[i]) << ',' << to_string(r.config.family)
        << ',' << r.config.objectives << ',' << r.config.dims << ',' << to_string(r.config.optimizer) << ','
        << r.runs.size() << ',' << fmt_double(r.mean_igd) << ',' << fmt_double(r.std_igd) << '\n';
  }
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "convergence.csv");
    write_records_csv(csv, result.records());
  }
  std::ofstream(dir / "summary.json") << summary_json(result) << '\n';
  std::ofstream(dir / "events.json") << event_log_json(result) << '\n';
}

}  // namespace fddmoea
