#include "sdot1/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "sdot1/geometry.hpp"
#include "sdot1/oracle.hpp"

namespace sdot1 {

namespace {

struct KMeansResult {
  std::vector<Point> centers;
  std::vector<double> masses;
  std::vector<int> assignment;  // input point -> center index
};

// Mass-proportional sampling of K distinct indices (Efraimidis-Spirakis keys).
std::vector<int> sample_initial_centers(const std::vector<double>& masses, int K,
                                        uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<std::pair<double, int>> keys;
  keys.reserve(masses.size());
  for (size_t i = 0; i < masses.size(); ++i) {
    double u = uniform(rng);
    while (u <= 0.0) u = uniform(rng);
    keys.emplace_back(-std::log(u) / masses[i], static_cast<int>(i));
  }
  std::partial_sort(keys.begin(), keys.begin() + K, keys.end());
  std::vector<int> chosen(K);
  for (int i = 0; i < K; ++i) chosen[i] = keys[i].second;
  return chosen;
}

KMeansResult weighted_kmeans(const std::vector<Point>& points,
                             const std::vector<double>& masses, int K, uint64_t seed,
                             int max_iterations) {
  const int N = static_cast<int>(points.size());
  KMeansResult result;
  result.centers.reserve(K);
  for (int idx : sample_initial_centers(masses, K, seed)) {
    result.centers.push_back(points[idx]);
  }
  result.assignment.assign(N, -1);
  std::vector<int> previous;

  std::vector<double> cluster_mass(K);
  for (int iter = 0; iter < max_iterations; ++iter) {
    // assignment step via an unweighted site index, ties to smallest index
    SiteSet sites{result.centers, std::vector<double>(K, 0.0)};
    SiteIndex index(sites);
    for (int i = 0; i < N; ++i) {
      result.assignment[i] = index.nearest(points[i]);
    }

    // reseed empty clusters at the point currently farthest from its center
    std::fill(cluster_mass.begin(), cluster_mass.end(), 0.0);
    for (int i = 0; i < N; ++i) cluster_mass[result.assignment[i]] += masses[i];
    bool reseeded = false;
    for (int c = 0; c < K; ++c) {
      if (cluster_mass[c] > 0.0) continue;
      int farthest = -1;
      double farthest_distance = -1.0;
      for (int i = 0; i < N; ++i) {
        const int a = result.assignment[i];
        if (cluster_mass[a] <= masses[i]) continue;  // would empty its own cluster
        const double d = squared_distance(points[i], result.centers[a]);
        if (d > farthest_distance) {
          farthest_distance = d;
          farthest = i;
        }
      }
      if (farthest < 0) continue;
      result.centers[c] = points[farthest];
      cluster_mass[result.assignment[farthest]] -= masses[farthest];
      result.assignment[farthest] = c;
      cluster_mass[c] = masses[farthest];
      reseeded = true;
    }

    if (!reseeded && result.assignment == previous) break;
    previous = result.assignment;

    // centroid update
    std::vector<double> sx(K, 0.0), sy(K, 0.0), sm(K, 0.0);
    for (int i = 0; i < N; ++i) {
      const int c = result.assignment[i];
      sx[c] += masses[i] * points[i].x;
      sy[c] += masses[i] * points[i].y;
      sm[c] += masses[i];
    }
    for (int c = 0; c < K; ++c) {
      if (sm[c] > 0.0) result.centers[c] = {sx[c] / sm[c], sy[c] / sm[c]};
    }
  }

  result.masses.assign(K, 0.0);
  for (int i = 0; i < N; ++i) result.masses[result.assignment[i]] += masses[i];
  return result;
}

// Collapses clusters whose centers coincide so the output support is distinct.
std::pair<DiscreteMeasure, std::vector<int>> finalize_clusters(const KMeansResult& km) {
  std::map<std::pair<double, double>, int> unique;
  std::vector<Point> points;
  std::vector<double> masses;
  std::vector<int> remap(km.centers.size(), -1);
  for (size_t c = 0; c < km.centers.size(); ++c) {
    if (km.masses[c] <= 0.0) continue;
    const auto key = std::make_pair(km.centers[c].x, km.centers[c].y);
    auto [it, inserted] = unique.try_emplace(key, static_cast<int>(points.size()));
    if (inserted) {
      points.push_back(km.centers[c]);
      masses.push_back(km.masses[c]);
    } else {
      masses[it->second] += km.masses[c];
    }
    remap[c] = it->second;
  }
  std::vector<int> parent_map(km.assignment.size());
  for (size_t i = 0; i < km.assignment.size(); ++i) {
    parent_map[i] = remap[km.assignment[i]];
  }
  return {DiscreteMeasure(std::move(points), std::move(masses)), std::move(parent_map)};
}

}  // namespace

std::pair<DiscreteMeasure, std::vector<int>> lloyd_coarsen(const DiscreteMeasure& nu,
                                                           int K, uint64_t seed,
                                                           int max_iterations) {
  if (K <= 0 || K > nu.size()) {
    throw std::invalid_argument("lloyd_coarsen: K must be in [1, n]");
  }
  if (K == nu.size()) {
    std::vector<int> identity(nu.size());
    std::iota(identity.begin(), identity.end(), 0);
    return {nu, std::move(identity)};
  }
  const KMeansResult km =
      weighted_kmeans(nu.points(), nu.masses(), K, seed, max_iterations);
  return finalize_clusters(km);
}

Hierarchy build_hierarchy(const DiscreteMeasure& nu, const HierarchyOptions& options) {
  if (options.coarsening_ratio < 2) {
    throw std::invalid_argument("build_hierarchy: coarsening ratio must be >= 2");
  }
  Hierarchy h;
  h.levels.push_back(nu);
  int level = 0;
  while (h.levels.back().size() > options.min_size) {
    ++level;
    const int current = h.levels.back().size();
    const int target = (current + options.coarsening_ratio - 1) / options.coarsening_ratio;
    auto [coarse, parent_map] = lloyd_coarsen(h.levels.back(), target,
                                              options.seed + level,
                                              options.kmeans_max_iterations);
    if (coarse.size() >= current) break;
    h.levels.push_back(std::move(coarse));
    h.parent_maps.push_back(std::move(parent_map));
  }
  return h;
}

std::vector<double> propagate_weights(const std::vector<double>& w_coarse,
                                      const std::vector<int>& parent_map) {
  std::vector<double> w_fine(parent_map.size());
  for (size_t i = 0; i < parent_map.size(); ++i) {
    const int p = parent_map[i];
    if (p < 0 || p >= static_cast<int>(w_coarse.size())) {
      throw std::invalid_argument("propagate_weights: parent index out of range");
    }
    w_fine[i] = w_coarse[p];
  }
  return w_fine;
}

std::vector<double> propagate_weights(const DiscreteMeasure& fine,
                                      const DiscreteMeasure& coarse,
                                      const std::vector<double>& w_coarse,
                                      const std::vector<int>& parent_map) {
  if (static_cast<size_t>(coarse.size()) != w_coarse.size()) {
    throw std::invalid_argument("propagate_weights: coarse weight size mismatch");
  }
  if (static_cast<size_t>(fine.size()) != parent_map.size()) {
    throw std::invalid_argument("propagate_weights: parent map size mismatch");
  }
  std::vector<double> w_fine = propagate_weights(w_coarse, parent_map);
  const int m = coarse.size();
  if (m < 3) return w_fine;

  std::vector<std::pair<double, int>> by_distance(m);
  for (int i = 0; i < fine.size(); ++i) {
    const Point p = fine.points()[i];
    for (int c = 0; c < m; ++c) {
      by_distance[c] = {squared_distance(p, coarse.points()[c]), c};
    }
    std::partial_sort(by_distance.begin(), by_distance.begin() + 3, by_distance.end());
    const Point a = coarse.points()[by_distance[0].second];
    const Point b = coarse.points()[by_distance[1].second];
    const Point c = coarse.points()[by_distance[2].second];
    const double wa = w_coarse[by_distance[0].second];
    const double wb = w_coarse[by_distance[1].second];
    const double wc = w_coarse[by_distance[2].second];
    // plane through the three nearest (position, weight) samples
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double scale = std::max({squared_distance(a, b), squared_distance(a, c),
                                   squared_distance(b, c)});
    if (std::abs(det) <= 1e-9 * scale) continue;  // near-collinear: keep the parent value
    const double lb = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    const double lc = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    w_fine[i] = wa + lb * (wb - wa) + lc * (wc - wa);
  }
  return w_fine;
}

SolveReport solve_multiscale(const DensityGrid& grid, const DiscreteMeasure& nu,
                             const SolverConfig& config, const HierarchyOptions& options,
                             MultiscaleStats* stats, const IterationLog& log) {
  const Hierarchy h = build_hierarchy(nu, options);
  const int L = h.depth() - 1;

  if (stats) {
    stats->levels.clear();
    stats->total_evaluations = 0;
  }

  std::vector<double> w(h.levels[L].size(), 0.0);
  SolveReport report;
  for (int l = L; l >= 0; --l) {
    if (l == 0 && options.subpixel_warmup) {
      const int k_final = config.subpixel_factor > 0
                              ? config.subpixel_factor
                              : subpixel_count(h.levels[0].size(), grid,
                                               config.max_subpixel_factor);
      if (k_final > 1) {
        SolverConfig warmup = config;
        warmup.subpixel_factor = 1;
        const SolveReport pre = minimize(grid, h.levels[0], w, warmup);
        w = pre.final_w;
        if (stats) {
          LevelStats ls;
          ls.level = 0;
          ls.support_size = h.levels[0].size();
          ls.iterations = pre.iterations;
          ls.evaluations = pre.evaluations;
          ls.subpixel_factor = 1;
          ls.final_mistransported_mass = pre.final_mistransported_mass;
          stats->levels.push_back(ls);
          stats->total_evaluations += pre.evaluations;
        }
      }
    }
    report = minimize(grid, h.levels[l], w, config, l == 0 ? log : IterationLog{});
    if (stats) {
      LevelStats ls;
      ls.level = l;
      ls.support_size = h.levels[l].size();
      ls.iterations = report.iterations;
      ls.evaluations = report.evaluations;
      ls.subpixel_factor = report.subpixel_factor;
      ls.final_mistransported_mass = report.final_mistransported_mass;
      if (options.log_level_w1 && l < L) {
        ls.w1_to_finer = discrete_w1({h.levels[l + 1].points(), h.levels[l + 1].masses(),
                                      h.levels[l].points(), h.levels[l].masses()})
                             .cost;
      }
      stats->levels.push_back(ls);
      stats->total_evaluations += report.evaluations;
    }
    if (l > 0) {
      w = propagate_weights(h.levels[l - 1], h.levels[l], report.final_w,
                            h.parent_maps[l - 1]);
    }
  }
  return report;
}

DiscreteMeasure quantize(const DensityGrid& grid, int n, uint64_t seed,
                         int max_iterations) {
  if (n < 1) throw std::invalid_argument("quantize: n must be >= 1");
  std::vector<Point> points;
  std::vector<double> masses;
  for (int r = 0; r < grid.ny(); ++r) {
    for (int c = 0; c < grid.nx(); ++c) {
      const double m = grid.pixel_mass(c, r);
      if (m > 0.0) {
        points.push_back(grid.pixel_center(c, r));
        masses.push_back(m);
      }
    }
  }
  if (static_cast<int>(points.size()) < n) {
    throw std::invalid_argument("quantize: fewer positive pixels than requested support size");
  }
  if (static_cast<int>(points.size()) == n) {
    return DiscreteMeasure(std::move(points), std::move(masses));
  }
  const KMeansResult km = weighted_kmeans(points, masses, n, seed, max_iterations);
  return finalize_clusters(km).first;
}

}  // namespace sdot1
