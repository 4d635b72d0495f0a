#include "fddmoea/moea.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "fddmoea/lattice.hpp"
#include "fddmoea/sampling.hpp"

namespace fddmoea {

std::vector<Vector> Population::decisions() const {
  std::vector<Vector> out;
  out.reserve(individuals.size());
  for (const auto& ind : individuals) out.push_back(ind.x);
  return out;
}

std::vector<Vector> Population::objectives() const {
  std::vector<Vector> out;
  out.reserve(individuals.size());
  for (const auto& ind : individuals) out.push_back(ind.f);
  return out;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<Vector>& points) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  const std::size_t m = points.front().size();
  for (const auto& p : points) {
    if (p.size() != m) throw std::invalid_argument("fast_nondominated_sort: inconsistent objective counts");
  }

  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated_by_me[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated_by_me[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }
  while (true) {
    std::vector<std::size_t> next;
    for (auto p : fronts.back()) {
      for (auto q : dominated_by_me[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  return fronts;
}

Vector crowding_distance(const std::vector<Vector>& front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) return Vector(n, inf);
  const std::size_t m = front.front().size();
  Vector distance(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    const double range = front[order.back()][obj] - front[order.front()][obj];
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      distance[order[i]] += (front[order[i + 1]][obj] - front[order[i - 1]][obj]) / range;
    }
  }
  return distance;
}

std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2, double eta,
                                        std::span<const double> draws) {
  if (p1.size() != p2.size() || draws.size() != p1.size()) {
    throw std::invalid_argument("sbx_crossover: size mismatch");
  }
  Vector c1(p1.begin(), p1.end());
  Vector c2(p2.begin(), p2.end());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (p1[i] == p2[i]) continue;
    const double u = draws[i];
    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    c1[i] = std::clamp(0.5 * ((1.0 + beta) * p1[i] + (1.0 - beta) * p2[i]), 0.0, 1.0);
    c2[i] = std::clamp(0.5 * ((1.0 - beta) * p1[i] + (1.0 + beta) * p2[i]), 0.0, 1.0);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2, double eta,
                                        double prob, Rng& rng) {
  if (uniform01(rng) >= prob) return {Vector(p1.begin(), p1.end()), Vector(p2.begin(), p2.end())};
  Vector draws(p1.size());
  for (auto& u : draws) u = uniform01(rng);
  return sbx_crossover(p1, p2, eta, draws);
}

Vector polynomial_mutation(std::span<const double> x, double eta, double prob, Rng& rng) {
  Vector y(x.begin(), x.end());
  const double power = 1.0 / (eta + 1.0);
  for (auto& v : y) {
    if (uniform01(rng) >= prob) continue;
    const double r = uniform01(rng);
    double dq = 0.0;
    if (r < 0.5) {
      const double xy = 1.0 - v;
      const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(xy, eta + 1.0);
      dq = std::pow(val, power) - 1.0;
    } else {
      const double xy = v;
      const double val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(xy, eta + 1.0);
      dq = 1.0 - std::pow(val, power);
    }
    v = std::clamp(v + dq, 0.0, 1.0);
  }
  return y;
}

OptimizerKind parse_optimizer(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "nsga2") return OptimizerKind::nsga2;
  if (lower == "rvea") return OptimizerKind::rvea;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "', expected nsga2|rvea");
}

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::nsga2 ? "nsga2" : "rvea"; }

namespace {

Population initial_population(const Acquisition& af, std::size_t dims, std::size_t size,
                              const std::vector<Vector>& seeds, Rng& rng) {
  Population pop;
  pop.individuals.reserve(size);
  for (std::size_t i = 0; i < seeds.size() && i < size; ++i) {
    if (seeds[i].size() != dims) throw std::invalid_argument("initial population: seed has the wrong dimension");
    pop.individuals.push_back({seeds[i], af(seeds[i])});
  }
  if (pop.size() == size) return pop;
  const Matrix design = latin_hypercube(size - pop.size(), dims, rng);
  for (std::size_t i = 0; i < design.rows(); ++i) {
    Individual ind{design.row_vector(i), {}};
    ind.f = af(ind.x);
    pop.individuals.push_back(std::move(ind));
  }
  return pop;
}

double mutation_probability(const VariationConfig& v, std::size_t dims) {
  return v.mutation_prob > 0.0 ? v.mutation_prob : 1.0 / static_cast<double>(dims);
}

// Rank and crowding for every member of a population.
struct RankInfo {
  std::vector<std::size_t> rank;
  Vector crowding;
};

RankInfo rank_population(const std::vector<Vector>& objs) {
  RankInfo info{std::vector<std::size_t>(objs.size()), Vector(objs.size())};
  const auto fronts = fast_nondominated_sort(objs);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<Vector> members;
    members.reserve(fronts[r].size());
    for (auto i : fronts[r]) members.push_back(objs[i]);
    const Vector cd = crowding_distance(members);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      info.rank[fronts[r][k]] = r;
      info.crowding[fronts[r][k]] = cd[k];
    }
  }
  return info;
}

std::size_t tournament(const RankInfo& info, Rng& rng) {
  const std::size_t n = info.rank.size();
  const std::size_t a = uniform_index(rng, n);
  const std::size_t b = uniform_index(rng, n);
  if (info.rank[a] != info.rank[b]) return info.rank[a] < info.rank[b] ? a : b;
  if (info.crowding[a] != info.crowding[b]) return info.crowding[a] > info.crowding[b] ? a : b;
  return uniform01(rng) < 0.5 ? a : b;
}

std::vector<Individual> make_offspring(const std::vector<Individual>& parents, const std::vector<std::size_t>& mating,
                                       const Acquisition& af, const VariationConfig& variation, std::size_t dims,
                                       std::size_t count, Rng& rng) {
  const double pm = mutation_probability(variation, dims);
  std::vector<Individual> children;
  children.reserve(count + 1);
  for (std::size_t k = 0; children.size() < count; k += 2) {
    const auto& a = parents[mating[k % mating.size()]].x;
    const auto& b = parents[mating[(k + 1) % mating.size()]].x;
    auto [c1, c2] = sbx_crossover(a, b, variation.crossover_eta, variation.crossover_prob, rng);
    for (Vector* c : {&c1, &c2}) {
      if (children.size() == count) break;
      Individual child{polynomial_mutation(*c, variation.mutation_eta, pm, rng), {}};
      child.f = af(child.x);
      children.push_back(std::move(child));
    }
  }
  return children;
}

}  // namespace

Population nsga2_optimize(const Acquisition& af, std::size_t dims, const Nsga2Config& config, Rng& rng) {
  if (config.population < 2) throw std::invalid_argument("nsga2_optimize: population must be at least 2");
  Population pop = initial_population(af, dims, config.population, config.seeds, rng);
  const std::size_t n = config.population;

  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    const RankInfo info = rank_population(pop.objectives());
    std::vector<std::size_t> mating(n);
    for (auto& m : mating) m = tournament(info, rng);
    auto children = make_offspring(pop.individuals, mating, af, config.variation, dims, n, rng);

    std::vector<Individual> combined = std::move(pop.individuals);
    combined.insert(combined.end(), std::make_move_iterator(children.begin()),
                    std::make_move_iterator(children.end()));
    std::vector<Vector> objs;
    objs.reserve(combined.size());
    for (const auto& ind : combined) objs.push_back(ind.f);

    std::vector<std::size_t> survivors;
    survivors.reserve(n);
    for (const auto& front : fast_nondominated_sort(objs)) {
      if (survivors.size() + front.size() <= n) {
        survivors.insert(survivors.end(), front.begin(), front.end());
        if (survivors.size() == n) break;
        continue;
      }
      std::vector<Vector> members;
      for (auto i : front) members.push_back(objs[i]);
      const Vector cd = crowding_distance(members);
      std::vector<std::size_t> order(front.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
      for (std::size_t k = 0; survivors.size() < n; ++k) survivors.push_back(front[order[k]]);
      break;
    }
    pop.individuals.clear();
    for (auto i : survivors) pop.individuals.push_back(std::move(combined[i]));
    pop.generation = gen;
  }
  return pop;
}

ReferenceVectorSet generate_reference_vectors(std::size_t objectives, std::size_t outer, std::size_t inner) {
  if (objectives < 2) throw std::invalid_argument("generate_reference_vectors: need at least two objectives");
  if (outer == 0) throw std::invalid_argument("generate_reference_vectors: outer layer needs at least one division");
  ReferenceVectorSet set;
  set.vectors = simplex_lattice(objectives, outer);
  if (inner > 0) {
    const double shift = 1.0 / (2.0 * static_cast<double>(objectives));
    for (auto p : simplex_lattice(objectives, inner)) {
      for (auto& v : p) v = 0.5 * v + shift;
      set.vectors.push_back(std::move(p));
    }
  }
  for (auto& v : set.vectors) {
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    for (auto& c : v) c /= norm;
  }
  return set;
}

std::pair<std::size_t, std::size_t> default_reference_layers(std::size_t objectives) {
  switch (objectives) {
    case 3: return {13, 0};
    case 5: return {5, 0};
    case 10: return {3, 2};
    case 20: return {2, 2};
    default: break;
  }
  std::size_t h = 1;
  while (simplex_lattice_size(objectives, h + 1) <= 120) ++h;
  return {h, 0};
}

namespace {

// Smallest angle from each vector to any other one.
Vector neighbour_angles(const std::vector<Vector>& vectors) {
  const std::size_t n = vectors.size();
  Vector gamma(n, std::numbers::pi / 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double c = 0.0;
      for (std::size_t k = 0; k < vectors[i].size(); ++k) c += vectors[i][k] * vectors[j][k];
      best = std::max(best, c);
    }
    if (n > 1) gamma[i] = std::max(std::acos(std::clamp(best, -1.0, 1.0)), 1e-12);
  }
  return gamma;
}

std::vector<std::size_t> apd_select_impl(const std::vector<Vector>& objs, const std::vector<Vector>& vectors,
                                         const Vector& gamma, double progress) {
  const std::size_t n = objs.size();
  const std::size_t m = vectors.front().size();
  const std::size_t nv = vectors.size();
  Vector zmin(m, std::numeric_limits<double>::infinity());
  for (const auto& f : objs) {
    for (std::size_t j = 0; j < m; ++j) zmin[j] = std::min(zmin[j], f[j]);
  }

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(nv, none);
  Vector best_apd(nv, std::numeric_limits<double>::infinity());
  Vector shifted(m);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      shifted[j] = objs[i][j] - zmin[j];
      norm += shifted[j] * shifted[j];
    }
    norm = std::sqrt(norm);
    std::size_t assigned = 0;
    double best_cos = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < nv; ++v) {
      double c = 0.0;
      for (std::size_t j = 0; j < m; ++j) c += shifted[j] * vectors[v][j];
      if (c > best_cos) {
        best_cos = c;
        assigned = v;
      }
    }
    const double cosine = norm > 0.0 ? std::clamp(best_cos / norm, -1.0, 1.0) : 1.0;
    const double angle = std::acos(cosine);
    const double apd = (1.0 + static_cast<double>(m) * progress * angle / gamma[assigned]) * norm;
    if (apd < best_apd[assigned]) {
      best_apd[assigned] = apd;
      best[assigned] = i;
    }
  }
  std::vector<std::size_t> out;
  for (auto b : best) {
    if (b != none) out.push_back(b);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> apd_select(const std::vector<Vector>& objectives, const std::vector<Vector>& vectors,
                                    double progress) {
  if (vectors.empty()) throw std::invalid_argument("apd_select: no reference vectors");
  if (objectives.empty()) return {};
  return apd_select_impl(objectives, vectors, neighbour_angles(vectors), progress);
}

Population rvea_optimize(const Acquisition& af, std::size_t dims, const ReferenceVectorSet& reference,
                         const RveaConfig& config, Rng& rng) {
  if (reference.vectors.empty()) throw std::invalid_argument("rvea_optimize: no reference vectors");
  const std::size_t m = reference.vectors.front().size();
  const std::vector<Vector>& initial = reference.vectors;
  std::vector<Vector> vectors = initial;
  Vector gamma = neighbour_angles(vectors);

  Population pop = initial_population(af, dims, std::max<std::size_t>(reference.size(), 2), config.seeds, rng);
  const auto period = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.adaptation_frequency * static_cast<double>(config.generations))));

  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    std::vector<std::size_t> mating(pop.size());
    std::iota(mating.begin(), mating.end(), 0);
    std::shuffle(mating.begin(), mating.end(), rng);
    auto children = make_offspring(pop.individuals, mating, af, config.variation, dims, pop.size(), rng);

    std::vector<Individual> combined = std::move(pop.individuals);
    combined.insert(combined.end(), std::make_move_iterator(children.begin()),
                    std::make_move_iterator(children.end()));
    std::vector<Vector> objs;
    objs.reserve(combined.size());
    for (const auto& ind : combined) objs.push_back(ind.f);

    const double progress = std::pow(static_cast<double>(gen) / static_cast<double>(config.generations),
                                     config.penalty_exponent);
    pop.individuals.clear();
    for (auto i : apd_select_impl(objs, vectors, gamma, progress)) pop.individuals.push_back(std::move(combined[i]));
    pop.generation = gen;

    if (gen % period == 0 && gen < config.generations) {
      Vector zmin(m, std::numeric_limits<double>::infinity());
      Vector zmax(m, -std::numeric_limits<double>::infinity());
      for (const auto& ind : pop.individuals) {
        for (std::size_t j = 0; j < m; ++j) {
          zmin[j] = std::min(zmin[j], ind.f[j]);
          zmax[j] = std::max(zmax[j], ind.f[j]);
        }
      }
      for (std::size_t v = 0; v < vectors.size(); ++v) {
        Vector scaled(m);
        double norm = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          scaled[j] = initial[v][j] * std::max(zmax[j] - zmin[j], 1e-12);
          norm += scaled[j] * scaled[j];
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
          for (auto& s : scaled) s /= norm;
          vectors[v] = std::move(scaled);
        }
      }
      gamma = neighbour_angles(vectors);
    }
  }
  return pop;
}

Population run_moea(const Acquisition& af, std::size_t dims, std::size_t objectives, const MoeaConfig& config,
                    Rng& rng) {
  if (config.kind == OptimizerKind::nsga2) return nsga2_optimize(af, dims, config.nsga2, rng);
  auto [outer, inner] = default_reference_layers(objectives);
  if (config.outer_divisions > 0) {
    outer = config.outer_divisions;
    inner = config.inner_divisions;
  }
  auto reference = generate_reference_vectors(objectives, outer, inner);
  reference.adaptation_frequency = config.rvea.adaptation_frequency;
  return rvea_optimize(af, dims, reference, config.rvea, rng);
}

}  // namespace fddmoea
