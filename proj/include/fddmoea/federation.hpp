#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fddmoea/benchmarks.hpp"
#include "fddmoea/infill.hpp"
#include "fddmoea/moea.hpp"
#include "fddmoea/surrogate.hpp"
#include "fddmoea/types.hpp"

namespace fddmoea {

/// A client's private data and local surrogate. Only `model` ever leaves it.
struct ClientState {
  std::size_t id = 0;
  Dataset data;
  RbfnModel model;
  Rng rng;
};

/// What a client sends to the server: its model and its dataset size.
struct Upload {
  std::size_t client_id = 0;
  RbfnModel model;
  std::size_t samples = 0;
};

struct WeightedModel {
  RbfnModel model;
  double weight = 0.0;
};

/// Reorders the (center, spread, weight-row) triples by ascending center norm;
/// ties fall back to the coordinates, then the spread and weights, then the
/// original position.
RbfnModel sort_centers(const RbfnModel& model);

/**
 * Sorted averaging: align every model by sort_centers, then take the
 * weighted sum of centers, spreads, weights and biases.
 *
 * The list is summed in a canonical order so the result does not depend on
 * how the models are listed. Weights must sum to one within 1e-12.
 */
RbfnModel sorted_average(const std::vector<WeightedModel>& models);

/// p_k = |D_k| / sum_j |D_j|.
Vector client_weights(std::span<const std::size_t> sizes);

/// ceil(ratio * clients) distinct ids drawn uniformly, returned ascending.
std::vector<std::size_t> select_participants(std::size_t clients, double ratio, Rng& rng);

/// Keeps whole non-domination fronts of the objective rows, then fills up from
/// the first overflowing front by descending crowding distance. Row order is
/// preserved. Identity when the dataset already fits.
Dataset truncate_dataset(const Dataset& data, std::size_t cap);

struct ClientConfig {
  std::size_t data_cap = 0;
  std::size_t centers = 1;
  TrainingConfig training;
  double failure_prob = 0.0;
};

/**
 * Sends `candidates` to `client`. One Bernoulli draw on the client's own
 * random stream decides whether the transfer fails (probability
 * `failure_prob`). On success the candidates are evaluated, appended and the
 * dataset truncated to the cap. The local model is retrained either way.
 * Returns whether the candidates arrived.
 */
bool deliver(const std::vector<Vector>& candidates, ClientState& client, const Problem& problem,
             const ClientConfig& config);

/// Server side. It only ever receives models, never data.
struct ServerState {
  RbfnModel global_model;
  std::vector<Upload> uploaded;

  void receive(Upload upload) { uploaded.push_back(std::move(upload)); }
  /// Weights p_k from the uploaded dataset sizes, then sorted averaging.
  const RbfnModel& aggregate();
};

struct FederationConfig {
  std::size_t clients = 10;
  double participation = 0.9;
  double failure_prob = 0.03;
  std::size_t per_round = 5;
  // Zero selects the defaults 11d - 1, 11d - 1 + 25 and floor(sqrt(M + d)) + 3.
  std::size_t initial_size = 0;
  std::size_t data_cap = 0;
  std::size_t centers = 0;
  TrainingConfig training;
  double alpha = 2.0;
  MoeaConfig moea;
  std::size_t max_restarts = 5;
  // Archive points, ranked by the acquisition, placed in the optimizer's
  // initial population each round. Zero starts from a plain Latin hypercube.
  std::size_t archive_seeds = 10;

  void validate() const;
};

/// The first `count` archive points in non-domination order of their
/// acquisition values (index order within a front).
std::vector<Vector> archive_seeds(const Acquisition& af, const std::vector<Vector>& archive, std::size_t count);

/// Snapshot of one communication round.
struct RoundState {
  std::size_t round = 0;
  std::vector<std::size_t> contributors;  // uploaded a model this round
  Vector weights;                         // p_k, aligned with contributors
  std::vector<Vector> candidates;         // dispatched at the end of the round
  std::vector<std::size_t> participants;  // selected to receive the candidates
  std::vector<bool> delivered;            // aligned with participants
  std::size_t fes = 0;                    // unique true evaluations so far
};

/**
 * Deterministic simulation of the federated optimization loop.
 *
 * Construction samples the shared Latin hypercube design, evaluates it, gives
 * every client a copy, draws the first participants and trains their models.
 * Each run_round then: collects the participants' models, aggregates them,
 * optimizes the federated LCB, selects new candidates, draws the next
 * participants and delivers the candidates to them (each retrains). A
 * candidate counts once toward the evaluation budget however many clients
 * receive it.
 */
class Simulation {
 public:
  Simulation(Problem problem, FederationConfig config, std::uint64_t seed);

  RoundState run_round();

  const Problem& problem() const noexcept { return problem_; }
  const FederationConfig& config() const noexcept { return config_; }
  std::size_t rounds_completed() const noexcept { return round_; }
  std::size_t fes() const noexcept { return archive_.size(); }
  std::size_t initial_size() const noexcept { return initial_size_; }
  std::size_t data_cap() const noexcept { return client_config_.data_cap; }
  std::size_t centers() const noexcept { return client_config_.centers; }

  /// Every true evaluation made so far.
  const Dataset& archive() const noexcept { return archive_; }
  const ServerState& server() const noexcept { return server_; }
  const std::vector<ClientState>& clients() const noexcept { return clients_; }
  const std::vector<std::size_t>& participants() const noexcept { return participants_; }

 private:
  Problem problem_;
  FederationConfig config_;
  ClientConfig client_config_;
  std::size_t initial_size_ = 0;
  Rng rng_;
  ServerState server_;
  std::vector<ClientState> clients_;
  std::vector<std::size_t> participants_;
  Dataset archive_;
  std::size_t round_ = 0;
};

}  // namespace fddmoea
