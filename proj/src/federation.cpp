#include "fddmoea/federation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fddmoea/acquisition.hpp"
#include "fddmoea/sampling.hpp"

namespace fddmoea {

RbfnModel sort_centers(const RbfnModel& model) {
  const std::size_t q = model.num_centers();
  Vector norms(q, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    for (double v : model.centers.row(i)) norms[i] += v * v;
  }
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    if (norms[a] != norms[b]) return norms[a] < norms[b];
    const auto ca = model.centers.row(a);
    const auto cb = model.centers.row(b);
    if (!std::equal(ca.begin(), ca.end(), cb.begin())) {
      return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
    }
    if (model.spreads[a] != model.spreads[b]) return model.spreads[a] < model.spreads[b];
    const auto wa = model.weights.row(a);
    const auto wb = model.weights.row(b);
    if (!std::equal(wa.begin(), wa.end(), wb.begin())) {
      return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);

  RbfnModel sorted;
  sorted.kernel = model.kernel;
  sorted.centers = model.centers.select_rows(order);
  sorted.weights = model.weights.select_rows(order);
  sorted.spreads.reserve(q);
  for (auto i : order) sorted.spreads.push_back(model.spreads[i]);
  sorted.biases = model.biases;
  return sorted;
}

namespace {

Vector flatten(const RbfnModel& m) {
  Vector flat;
  flat.reserve(m.centers.data().size() + m.spreads.size() + m.weights.data().size() + m.biases.size());
  flat.insert(flat.end(), m.centers.data().begin(), m.centers.data().end());
  flat.insert(flat.end(), m.spreads.begin(), m.spreads.end());
  flat.insert(flat.end(), m.weights.data().begin(), m.weights.data().end());
  flat.insert(flat.end(), m.biases.begin(), m.biases.end());
  return flat;
}

void accumulate(std::vector<double>& into, const std::vector<double>& from, double weight) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += weight * from[i];
}

}  // namespace

RbfnModel sorted_average(const std::vector<WeightedModel>& models) {
  if (models.empty()) throw std::invalid_argument("sorted_average: no models");
  const auto& first = models.front().model;
  double total = 0.0;
  for (const auto& wm : models) {
    const auto& m = wm.model;
    if (m.num_centers() != first.num_centers() || m.dims() != first.dims() || m.objectives() != first.objectives() ||
        m.kernel != first.kernel) {
      throw std::invalid_argument("sorted_average: models have different shapes");
    }
    total += wm.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("sorted_average: weights must sum to one");

  struct Entry {
    RbfnModel model;
    double weight;
    Vector key;
  };
  std::vector<Entry> entries;
  entries.reserve(models.size());
  for (const auto& wm : models) {
    RbfnModel sorted = sort_centers(wm.model);
    Vector key = flatten(sorted);
    entries.push_back({std::move(sorted), wm.weight, std::move(key)});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.key < b.key;
  });

  RbfnModel avg;
  avg.kernel = first.kernel;
  avg.centers = Matrix(first.num_centers(), first.dims());
  avg.spreads.assign(first.num_centers(), 0.0);
  avg.weights = Matrix(first.num_centers(), first.objectives());
  avg.biases.assign(first.objectives(), 0.0);
  for (const auto& e : entries) {
    accumulate(avg.centers.data(), e.model.centers.data(), e.weight);
    accumulate(avg.spreads, e.model.spreads, e.weight);
    accumulate(avg.weights.data(), e.model.weights.data(), e.weight);
    accumulate(avg.biases, e.model.biases, e.weight);
  }
  return avg;
}

Vector client_weights(std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("client_weights: no clients");
  const double total = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  if (total <= 0.0) throw std::invalid_argument("client_weights: all datasets are empty");
  Vector p;
  p.reserve(sizes.size());
  for (auto s : sizes) p.push_back(static_cast<double>(s) / total);
  return p;
}

std::vector<std::size_t> select_participants(std::size_t clients, double ratio, Rng& rng) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("select_participants: ratio must be in (0, 1]");
  // The epsilon absorbs representation error such as 0.7 * 10 = 7.000000000000001.
  const auto count = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(clients) - 1e-9));
  if (count == 0) throw std::invalid_argument("select_participants: no client would participate");
  std::vector<std::size_t> ids(clients);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Dataset truncate_dataset(const Dataset& data, std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("truncate_dataset: cap must be positive");
  if (data.size() <= cap) return data;
  const auto objs = data.y.to_rows();
  std::vector<std::size_t> keep;
  keep.reserve(cap);
  for (const auto& front : fast_nondominated_sort(objs)) {
    if (keep.size() + front.size() <= cap) {
      keep.insert(keep.end(), front.begin(), front.end());
      if (keep.size() == cap) break;
      continue;
    }
    std::vector<Vector> members;
    members.reserve(front.size());
    for (auto i : front) members.push_back(objs[i]);
    const Vector cd = crowding_distance(members);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
    for (std::size_t k = 0; keep.size() < cap; ++k) keep.push_back(front[order[k]]);
    break;
  }
  std::sort(keep.begin(), keep.end());
  return {data.x.select_rows(keep), data.y.select_rows(keep)};
}

bool deliver(const std::vector<Vector>& candidates, ClientState& client, const Problem& problem,
             const ClientConfig& config) {
  const bool arrived = uniform01(client.rng) >= config.failure_prob;
  if (arrived) {
    for (const auto& x : candidates) client.data.append(x, problem.evaluate(x));
    if (config.data_cap > 0) client.data = truncate_dataset(client.data, config.data_cap);
  }
  client.model = fit_local(client.data, config.centers, config.training, client.rng);
  return arrived;
}

const RbfnModel& ServerState::aggregate() {
  if (uploaded.empty()) throw std::logic_error("ServerState::aggregate: nothing uploaded");
  std::vector<std::size_t> sizes;
  sizes.reserve(uploaded.size());
  for (const auto& u : uploaded) sizes.push_back(u.samples);
  const Vector p = client_weights(sizes);
  std::vector<WeightedModel> models;
  models.reserve(uploaded.size());
  for (std::size_t k = 0; k < uploaded.size(); ++k) models.push_back({uploaded[k].model, p[k]});
  global_model = sorted_average(models);
  return global_model;
}

void FederationConfig::validate() const {
  if (clients == 0) throw std::invalid_argument("clients must be at least 1");
  if (!(participation > 0.0 && participation <= 1.0)) throw std::invalid_argument("participation must be in (0, 1]");
  if (!(failure_prob >= 0.0 && failure_prob < 1.0)) throw std::invalid_argument("failure probability must be in [0, 1)");
  if (per_round == 0) throw std::invalid_argument("per-round candidate count must be at least 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (!(training.learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");
  if (training.batch_size == 0) throw std::invalid_argument("batch size must be at least 1");
}

std::vector<Vector> archive_seeds(const Acquisition& af, const std::vector<Vector>& archive, std::size_t count) {
  if (count == 0 || archive.empty()) return {};
  std::vector<Vector> scores;
  scores.reserve(archive.size());
  for (const auto& x : archive) scores.push_back(af(x));
  std::vector<Vector> seeds;
  for (const auto& front : fast_nondominated_sort(scores)) {
    for (auto i : front) {
      if (seeds.size() == count) return seeds;
      seeds.push_back(archive[i]);
    }
  }
  return seeds;
}

Simulation::Simulation(Problem problem, FederationConfig config, std::uint64_t seed)
    : problem_(std::move(problem)), config_(std::move(config)), rng_(make_rng(seed, 0)) {
  config_.validate();
  const std::size_t d = problem_.dims();
  const std::size_t m = problem_.objectives();
  initial_size_ = config_.initial_size > 0 ? config_.initial_size : 11 * d - 1;
  client_config_.data_cap = config_.data_cap > 0 ? config_.data_cap : 11 * d - 1 + 25;
  // One q for every client so that uploaded models can be averaged.
  client_config_.centers = std::min(config_.centers > 0 ? config_.centers : center_cap(m, d), initial_size_);
  client_config_.training = config_.training;
  client_config_.failure_prob = config_.failure_prob;

  const Matrix design = latin_hypercube(initial_size_, d, rng_);
  for (std::size_t i = 0; i < design.rows(); ++i) archive_.append(design.row(i), problem_.evaluate(design.row(i)));

  Dataset initial = archive_;
  if (initial.size() > client_config_.data_cap) initial = truncate_dataset(initial, client_config_.data_cap);
  clients_.reserve(config_.clients);
  for (std::size_t k = 0; k < config_.clients; ++k) {
    clients_.push_back(ClientState{k, initial, {}, make_rng(seed, k + 1)});
  }
  participants_ = select_participants(config_.clients, config_.participation, rng_);
  for (auto k : participants_) {
    auto& c = clients_[k];
    c.model = fit_local(c.data, client_config_.centers, client_config_.training, c.rng);
  }
}

RoundState Simulation::run_round() {
  RoundState state;
  state.round = ++round_;
  const std::size_t d = problem_.dims();
  const std::size_t m = problem_.objectives();

  server_.uploaded.clear();
  for (auto k : participants_) {
    const auto& c = clients_[k];
    server_.receive(Upload{k, c.model, c.data.size()});
    state.contributors.push_back(k);
  }
  server_.aggregate();
  {
    std::vector<std::size_t> sizes;
    for (const auto& u : server_.uploaded) sizes.push_back(u.samples);
    state.weights = client_weights(sizes);
  }

  Acquisition af;
  if (server_.uploaded.size() >= 2) {
    std::vector<RbfnModel> locals;
    locals.reserve(server_.uploaded.size());
    for (const auto& u : server_.uploaded) locals.push_back(u.model);
    af = [lcb = FederatedLcb(server_.global_model, std::move(locals), config_.alpha)](std::span<const double> x) {
      return lcb.lcb(x);
    };
  } else {
    // A single model carries no ensemble spread; optimize its prediction.
    af = [model = server_.global_model](std::span<const double> x) { return predict(model, x); };
  }

  InfillConfig infill;
  infill.count = config_.per_round;
  infill.max_restarts = config_.max_restarts;
  const auto evaluated = archive_.x.to_rows();
  MoeaConfig moea = config_.moea;
  moea.nsga2.seeds = moea.rvea.seeds = archive_seeds(af, evaluated, config_.archive_seeds);
  state.candidates = select_candidates(af, d, m, moea, infill, rng_, evaluated);

  participants_ = select_participants(config_.clients, config_.participation, rng_);
  bool any_arrived = false;
  for (auto k : participants_) {
    const bool arrived = deliver(state.candidates, clients_[k], problem_, client_config_);
    state.participants.push_back(k);
    state.delivered.push_back(arrived);
    any_arrived = any_arrived || arrived;
  }
  if (any_arrived) {
    for (const auto& x : state.candidates) archive_.append(x, problem_.evaluate(x));
  }
  state.fes = archive_.size();
  return state;
}

}  // namespace fddmoea
