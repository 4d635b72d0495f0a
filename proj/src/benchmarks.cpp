#include "fddmoea/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fddmoea/lattice.hpp"
#include "fddmoea/metrics.hpp"

namespace fddmoea {

namespace {

constexpr double kPi = std::numbers::pi;

// Spherical mapping shared by DTLZ2-6: f_1 = r * prod cos(theta_j),
// f_i = r * prod_{j < M-i+1} cos(theta_j) * sin(theta_{M-i+1}).
Vector spherical(std::span<const double> theta, double radius, std::size_t objectives) {
  Vector f(objectives, radius);
  for (std::size_t i = 0; i < objectives; ++i) {
    const std::size_t cos_terms = objectives - 1 - i;
    for (std::size_t j = 0; j < cos_terms; ++j) f[i] *= std::cos(theta[j]);
    if (i > 0) f[i] *= std::sin(theta[cos_terms]);
  }
  return f;
}

// Largest lattice resolution whose point count does not exceed n.
std::size_t lattice_divisions_for(std::size_t dims, std::size_t n) {
  std::size_t h = 1;
  while (simplex_lattice_size(dims, h + 1) <= n) ++h;
  return h;
}

}  // namespace

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower.size() == 5 && lower.starts_with("dtlz") && lower[4] >= '1' && lower[4] <= '7') {
    return static_cast<Family>(lower[4] - '0');
  }
  throw std::invalid_argument("unknown problem '" + std::string(name) + "', expected dtlz1..dtlz7");
}

std::string to_string(Family family) { return "dtlz" + std::to_string(static_cast<int>(family)); }

Problem::Problem(Family family, std::size_t objectives, std::size_t dims, double dtlz4_alpha)
    : family_(family), objectives_(objectives), dims_(dims), alpha_(dtlz4_alpha) {
  const int id = static_cast<int>(family);
  if (id < 1 || id > 7) throw std::invalid_argument("Problem: family must be DTLZ1..DTLZ7");
  if (objectives < 2) throw std::invalid_argument("Problem: at least two objectives are required");
  if (dims < objectives) throw std::invalid_argument("Problem: DTLZ needs d >= M");
  if (!(dtlz4_alpha > 0.0)) throw std::invalid_argument("Problem: DTLZ4 alpha must be positive");
}

double Problem::distance_function(std::span<const double> x) const {
  const auto tail = x.subspan(objectives_ - 1);
  const double k = static_cast<double>(tail.size());
  double g = 0.0;
  switch (family_) {
    case Family::dtlz1:
    case Family::dtlz3:
      for (double v : tail) g += (v - 0.5) * (v - 0.5) - std::cos(20.0 * kPi * (v - 0.5));
      return 100.0 * (k + g);
    case Family::dtlz2:
    case Family::dtlz4:
    case Family::dtlz5:
      for (double v : tail) g += (v - 0.5) * (v - 0.5);
      return g;
    case Family::dtlz6:
      for (double v : tail) g += std::pow(v, 0.1);
      return g;
    case Family::dtlz7:
      for (double v : tail) g += v;
      return 1.0 + 9.0 / k * g;
  }
  return g;
}

Vector Problem::evaluate(std::span<const double> x) const {
  if (x.size() != dims_) {
    throw std::invalid_argument("Problem::evaluate: expected " + std::to_string(dims_) + " variables, got " +
                                std::to_string(x.size()));
  }
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("Problem::evaluate: variable outside [0,1]");
  }
  const std::size_t m = objectives_;
  const double g = distance_function(x);

  switch (family_) {
    case Family::dtlz1: {
      Vector f(m, 0.5 * (1.0 + g));
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t prod_terms = m - 1 - i;
        for (std::size_t j = 0; j < prod_terms; ++j) f[i] *= x[j];
        if (i > 0) f[i] *= 1.0 - x[prod_terms];
      }
      return f;
    }
    case Family::dtlz2:
    case Family::dtlz3: {
      Vector theta(m - 1);
      for (std::size_t j = 0; j + 1 < m; ++j) theta[j] = x[j] * kPi / 2.0;
      return spherical(theta, 1.0 + g, m);
    }
    case Family::dtlz4: {
      Vector theta(m - 1);
      for (std::size_t j = 0; j + 1 < m; ++j) theta[j] = std::pow(x[j], alpha_) * kPi / 2.0;
      return spherical(theta, 1.0 + g, m);
    }
    case Family::dtlz5:
    case Family::dtlz6: {
      Vector theta(m - 1);
      theta[0] = x[0] * kPi / 2.0;
      for (std::size_t j = 1; j + 1 < m; ++j) theta[j] = kPi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[j]);
      return spherical(theta, 1.0 + g, m);
    }
    case Family::dtlz7: {
      Vector f(m);
      double h = static_cast<double>(m);
      for (std::size_t i = 0; i + 1 < m; ++i) {
        f[i] = x[i];
        h -= x[i] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * x[i]));
      }
      f[m - 1] = (1.0 + g) * h;
      return f;
    }
  }
  throw std::logic_error("Problem::evaluate: unreachable");
}

std::vector<Vector> Problem::sample_pareto_front(std::size_t n) const {
  const std::size_t m = objectives_;
  if (n < m) throw std::invalid_argument("sample_pareto_front: need n >= M");

  switch (family_) {
    case Family::dtlz1: {
      auto pts = simplex_lattice(m, lattice_divisions_for(m, n));
      for (auto& p : pts) {
        for (auto& v : p) v *= 0.5;
      }
      return pts;
    }
    case Family::dtlz2:
    case Family::dtlz3:
    case Family::dtlz4: {
      auto pts = simplex_lattice(m, lattice_divisions_for(m, n));
      for (auto& p : pts) {
        double norm = 0.0;
        for (double v : p) norm += v * v;
        norm = std::sqrt(norm);
        for (auto& v : p) v /= norm;
      }
      return pts;
    }
    case Family::dtlz5:
    case Family::dtlz6: {
      std::vector<Vector> pts;
      pts.reserve(n);
      Vector theta(m - 1, kPi / 4.0);
      for (std::size_t i = 0; i < n; ++i) {
        theta[0] = static_cast<double>(i) / static_cast<double>(n - 1) * kPi / 2.0;
        pts.push_back(spherical(theta, 1.0, m));
      }
      return pts;
    }
    case Family::dtlz7: {
      const std::size_t positions = m - 1;
      // Smallest per-axis resolution whose full grid covers n points.
      std::size_t grid = 1;
      auto grid_size = [positions](std::size_t g) {
        double total = 1.0;
        for (std::size_t i = 0; i < positions; ++i) total *= static_cast<double>(g);
        return total;
      };
      while (grid_size(grid) < static_cast<double>(n)) ++grid;

      std::vector<Vector> positions_set;
      if (grid_size(grid) <= 4.0 * static_cast<double>(n)) {
        std::vector<std::size_t> idx(positions, 0);
        const double step = grid > 1 ? 1.0 / static_cast<double>(grid - 1) : 0.0;
        while (true) {
          Vector p(positions);
          for (std::size_t i = 0; i < positions; ++i) p[i] = static_cast<double>(idx[i]) * step;
          positions_set.push_back(std::move(p));
          std::size_t axis = 0;
          while (axis < positions && ++idx[axis] == grid) idx[axis++] = 0;
          if (axis == positions) break;
        }
      } else {
        // Grid too large to filter; use a fixed-seed uniform sample instead.
        Rng rng = make_rng(0xd71a7u, m);
        positions_set.resize(n, Vector(positions));
        for (auto& p : positions_set) {
          for (auto& v : p) v = uniform01(rng);
        }
      }

      std::vector<Vector> pts;
      pts.reserve(positions_set.size());
      for (const auto& p : positions_set) {
        Vector f(m);
        double h = static_cast<double>(m);
        for (std::size_t i = 0; i < positions; ++i) {
          f[i] = p[i];
          h -= p[i] / 2.0 * (1.0 + std::sin(3.0 * kPi * p[i]));
        }
        f[m - 1] = 2.0 * h;
        pts.push_back(std::move(f));
      }
      return nondominated_filter(pts);
    }
  }
  throw std::invalid_argument("sample_pareto_front: unsupported family");
}

}  // namespace fddmoea
