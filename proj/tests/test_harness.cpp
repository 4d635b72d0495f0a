#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fddmoea/harness.hpp"
#include "fddmoea/metrics.hpp"
#include "fddmoea/sampling.hpp"
#include "json.hpp"

using namespace fddmoea;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig cfg;
  cfg.dims = 5;
  cfg.rounds = 3;
  cfg.runs = 2;
  cfg.population = 16;
  cfg.generations = 3;
  cfg.epochs = 3;
  cfg.reference_points = 200;
  return cfg;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_records_csv(out, r.records());
  return out.str();
}

}  // namespace

TEST_CASE("config text overrides the defaults") {
  std::istringstream in(
      "# test\n"
      "problem = DTLZ5\n"
      "objectives=5\n"
      "dims = 20   # trailing comment\n"
      "\n"
      "optimizer = rvea\n"
      "failure-prob = 0.1\n"
      "participation = 0.5\n"
      "kernel = printed\n"
      "seed = 42\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.family == Family::dtlz5);
  CHECK(cfg.objectives == 5);
  CHECK(cfg.dims == 20);
  CHECK(cfg.optimizer == OptimizerKind::rvea);
  CHECK(cfg.failure_prob == 0.1);
  CHECK(cfg.participation == 0.5);
  CHECK(cfg.kernel == KernelForm::printed);
  CHECK(cfg.seed == 42);
  CHECK(cfg.rounds == 24);
  CHECK(cfg.per_round == 5);
  CHECK(cfg.runs == 20);
}

TEST_CASE("bad configuration is reported") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(cfg.set("colour", "red"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("dims", "ten"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("dims", "10x"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("problem", "zdt1"), std::invalid_argument);
  std::istringstream missing_eq("dims 10\n");
  CHECK_THROWS_AS(parse_config(missing_eq), std::invalid_argument);
  CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"), std::invalid_argument);

  auto bad = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](auto& c) { c.participation = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.participation = 1.2; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.failure_prob = -0.1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.runs = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.dims = 2; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& c) { c.learning_rate = -1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(bad([](auto& c) { c.clients = 0; })), std::invalid_argument);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("CSV round trip") {
  const std::vector<ConvergenceRecord> recs{{0, 0, 109, 0.123456789012345678, 0.0},
                                            {0, 1, 114, 1.0 / 3.0, 12.5},
                                            {3, 24, 229, 1e-17, 1e6}};
  std::stringstream buf;
  write_records_csv(buf, recs);
  CHECK(buf.str().rfind("run,iter,fes,igd,ms\n", 0) == 0);
  CHECK(read_records_csv(buf) == recs);
  std::istringstream bad("run,iter,fes,igd,ms\n1,2,3\n");
  CHECK_THROWS_AS(read_records_csv(bad), std::invalid_argument);
}

TEST_CASE("table formatting") {
  CHECK(format_mean_std(0.1738, 0.019) == "0.1738 (1.9e-02)");
  CHECK(format_mean_std(0.67041, 0.0402) == "0.67041 (4.0e-02)");
}

TEST_CASE("experiment records, budget and determinism") {
  auto cfg = tiny();
  cfg.failure_prob = 0.0;
  const auto a = run_experiment(cfg);
  REQUIRE(a.runs.size() == 2);
  for (const auto& run : a.runs) {
    REQUIRE(run.records.size() == 4);
    for (std::size_t r = 0; r < run.records.size(); ++r) {
      CHECK(run.records[r].iter == r);
      CHECK(run.records[r].fes == 54 + 5 * r);
      CHECK(run.records[r].ms == 0.0);
      CHECK(std::isfinite(run.records[r].igd));
    }
  }
  CHECK(a.runs[1].seed == cfg.seed + 1);
  const double mean = 0.5 * (a.runs[0].final_igd() + a.runs[1].final_igd());
  CHECK(a.mean_igd == doctest::Approx(mean));
  CHECK(a.std_igd == doctest::Approx(std::abs(a.runs[0].final_igd() - a.runs[1].final_igd()) / std::sqrt(2.0)));

  const auto b = run_experiment(cfg);
  CHECK(csv_of(a) == csv_of(b));

  RunOptions two_workers;
  two_workers.workers = 2;
  CHECK(csv_of(run_experiment(cfg, two_workers)) == csv_of(a));
}

TEST_CASE("archive IGD over the full archive never rises") {
  auto cfg = tiny();
  cfg.rounds = 4;
  cfg.runs = 1;
  const auto problem = cfg.problem();
  const auto reference = problem.sample_pareto_front(cfg.reference_points);
  Simulation sim(problem, cfg.federation(), 3);
  double prev = igd(sim.archive().y.to_rows(), reference);
  for (int r = 0; r < 4; ++r) {
    sim.run_round();
    const double now = igd(sim.archive().y.to_rows(), reference);
    CHECK(now <= prev);
    prev = now;
  }
}

TEST_CASE("zero rounds report the initial design") {
  auto cfg = tiny();
  cfg.runs = 1;
  cfg.rounds = 0;
  const auto result = run_experiment(cfg);
  REQUIRE(result.runs[0].records.size() == 1);

  const auto problem = cfg.problem();
  auto rng = make_rng(cfg.seed, 0);
  const auto design = latin_hypercube(11 * cfg.dims - 1, cfg.dims, rng);
  std::vector<Vector> objs;
  for (std::size_t i = 0; i < design.rows(); ++i) objs.push_back(problem.evaluate(design.row(i)));
  const double expect = igd(nondominated_filter(objs), problem.sample_pareto_front(cfg.reference_points));
  CHECK(result.mean_igd == expect);
  CHECK(result.std_igd == 0.0);
  CHECK(result.runs[0].final_fes() == 54);
}

TEST_CASE("summary and event log") {
  auto cfg = tiny();
  cfg.runs = 1;
  const auto result = run_experiment(cfg);
  const auto summary = nlohmann::json::parse(summary_json(result));
  CHECK(summary["problem"] == "dtlz2");
  CHECK(summary["M"] == 3);
  CHECK(summary["d"] == 5);
  CHECK(summary["optimizer"] == "nsga2");
  CHECK(summary["mean_igd"].get<double>() == result.mean_igd);
  CHECK(summary["runs"].size() == 1);

  const auto events = nlohmann::json::parse(event_log_json(result));
  REQUIRE(events.size() == 1);
  const auto& rounds = events[0]["rounds"];
  REQUIRE(rounds.size() == 3);
  CHECK(rounds[0]["round"] == 1);
  CHECK(rounds[0]["participants"].size() == 9);
  CHECK(rounds[0]["delivery"].get<std::string>().size() == 9);

  const auto dir = std::filesystem::temp_directory_path() / "fddmoea_harness_test";
  std::filesystem::remove_all(dir);
  write_experiment_outputs(dir, result);
  CHECK(std::filesystem::exists(dir / "convergence.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "events.json"));
  std::ifstream csv(dir / "convergence.csv");
  CHECK(read_records_csv(csv) == result.records());
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps") {
  auto cfg = tiny();
  cfg.runs = 1;
  cfg.rounds = 1;
  const auto single = sweep(cfg, SweepParameter::participation, {0.9});
  REQUIRE(single.results.size() == 1);
  CHECK(csv_of(single.results[0]) == csv_of(run_experiment(cfg)));

  const auto pf = sweep(cfg, SweepParameter::failure_prob, {0.0, 0.5});
  std::ostringstream out;
  write_sweep_csv(out, pf);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "parameter,value,problem,M,d,optimizer,runs,mean_igd,std_igd");
  std::getline(lines, line);
  CHECK(line.rfind("failure-prob,0,dtlz2,3,5,nsga2,1,", 0) == 0);

  CHECK_THROWS_AS(sweep(cfg, SweepParameter::failure_prob, {0.1, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(cfg, SweepParameter::participation, {}), std::invalid_argument);
  CHECK(parse_sweep_parameter("lambda") == SweepParameter::participation);
  CHECK(parse_sweep_parameter("pf") == SweepParameter::failure_prob);
  CHECK_THROWS_AS(parse_sweep_parameter("epochs"), std::invalid_argument);
}
