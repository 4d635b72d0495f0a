// Command-line front end for running and sweeping federated optimization experiments.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fddmoea/harness.hpp"

namespace {

using fddmoea::ExperimentConfig;

// Flags shared by every subcommand; each maps onto an ExperimentConfig key.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
    const std::vector<std::pair<std::string, std::string>> keys = {
        {"problem", "dtlz1..dtlz7"},
        {"objectives", "number of objectives M"},
        {"dims", "decision dimension d"},
        {"optimizer", "nsga2 | rvea"},
        {"clients", "number of clients N"},
        {"participation", "participation ratio lambda"},
        {"failure-prob", "communication failure probability p_f"},
        {"rounds", "communication rounds R"},
        {"per-round", "new evaluations per round m"},
        {"runs", "independent runs"},
        {"seed", "base seed (run i uses seed + i)"},
        {"out", "output directory"},
        {"epochs", "local epochs E"},
        {"learning-rate", "SGD learning rate"},
        {"batch-size", "SGD batch size B"},
        {"alpha", "LCB exploration weight"},
        {"kernel", "squared | printed"},
        {"dtlz4-alpha", "DTLZ4 bias exponent"},
        {"population", "NSGA-II population size"},
        {"generations", "optimizer generations"},
        {"max-restarts", "optimizer restarts when too few distinct solutions"},
        {"archive-seeds", "archive points placed in each optimizer start (0 = plain Latin hypercube)"},
        {"reference-points", "Pareto front reference set size"},
    };
    values.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      values[i].first = keys[i].first;
      options.emplace_back(keys[i].first, app.add_option("--" + keys[i].first, values[i].second, keys[i].second));
    }
  }

  ExperimentConfig build() const {
    ExperimentConfig config;
    if (!config_file.empty()) config = fddmoea::load_config_file(config_file);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (options[i].second->count() > 0) config.set(values[i].first, values[i].second);
    }
    return config;
  }
};

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("invalid sweep value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no sweep values given");
  return out;
}

void print_summary(const fddmoea::ExperimentResult& result) {
  const auto& c = result.config;
  std::printf("%s M=%zu d=%zu %s  N=%zu lambda=%g p_f=%g  runs=%zu  IGD %s\n", fddmoea::to_string(c.family).c_str(),
              c.objectives, c.dims, fddmoea::to_string(c.optimizer).c_str(), c.clients, c.participation,
              c.failure_prob, result.runs.size(), fddmoea::format_mean_std(result.mean_igd, result.std_igd).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated data-driven evolutionary multi-objective optimization"};
  app.require_subcommand(1);

  std::size_t workers = 1;
  bool timing = false;

  auto* run = app.add_subcommand("run", "run one experiment configuration");
  ConfigFlags run_flags;
  run_flags.attach(*run);
  run->add_option("--workers", workers, "runs executed in parallel")->check(CLI::PositiveNumber);
  run->add_flag("--timing", timing, "record wall-clock ms in the convergence CSV");

  auto* sw = app.add_subcommand("sweep", "repeat an experiment over participation or failure-probability values");
  ConfigFlags sweep_flags;
  sweep_flags.attach(*sw);
  std::string parameter;
  std::string values;
  sw->add_option("--param", parameter, "participation | failure-prob")->required();
  sw->add_option("--values", values, "comma-separated values")->required();
  sw->add_option("--workers", workers, "runs executed in parallel")->check(CLI::PositiveNumber);
  sw->add_flag("--timing", timing, "record wall-clock ms in the convergence CSV");

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig config;
  try {
    config = (run->parsed() ? run_flags : sweep_flags).build();
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  const fddmoea::RunOptions options{workers, timing};
  try {
    if (run->parsed()) {
      const auto result = fddmoea::run_experiment(config, options);
      print_summary(result);
      if (!config.out.empty()) fddmoea::write_experiment_outputs(config.out, result);
      return 0;
    }

    std::vector<double> points;
    fddmoea::SweepParameter which{};
    try {
      which = fddmoea::parse_sweep_parameter(parameter);
      points = parse_values(values);
    } catch (const std::exception& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return 2;
    }
    const auto result = fddmoea::sweep(config, which, points, options);
    for (const auto& r : result.results) print_summary(r);
    if (!config.out.empty()) {
      const std::filesystem::path dir = config.out;
      std::filesystem::create_directories(dir);
      std::ofstream csv(dir / "sweep.csv");
      fddmoea::write_sweep_csv(csv, result);
      for (std::size_t i = 0; i < result.values.size(); ++i) {
        fddmoea::write_experiment_outputs(dir / (fddmoea::to_string(which) + "_" + std::to_string(i)),
                                          result.results[i]);
      }
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
