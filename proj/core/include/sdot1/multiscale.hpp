#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdot1/measures.hpp"
#include "sdot1/optimizer.hpp"

namespace sdot1 {

struct HierarchyOptions {
  int coarsening_ratio = 5;
  int min_size = 20;
  uint64_t seed = 0;
  int kmeans_max_iterations = 100;
  bool log_level_w1 = false;  // compute W1 between consecutive levels (oracle solve each)
  // converge the finest level on whole-pixel centers first, then refine on
  // the final subpixel grid; most iterations then use the cheap rasterization
  bool subpixel_warmup = true;
};

/// Coarse-to-fine decomposition of a discrete measure. levels[0] is the
/// original measure; parent_maps[l-1] maps each point of levels[l-1] to its
/// cluster center in levels[l].
struct Hierarchy {
  std::vector<DiscreteMeasure> levels;
  std::vector<std::vector<int>> parent_maps;

  int depth() const { return static_cast<int>(levels.size()); }
};

/// One weighted K-means coarsening step (Lloyd iterations until the
/// assignment is fixed or the iteration cap is hit).
std::pair<DiscreteMeasure, std::vector<int>> lloyd_coarsen(const DiscreteMeasure& nu,
                                                           int K, uint64_t seed,
                                                           int max_iterations = 100);

Hierarchy build_hierarchy(const DiscreteMeasure& nu, const HierarchyOptions& options = {});

std::vector<double> propagate_weights(const std::vector<double>& w_coarse,
                                      const std::vector<int>& parent_map);

/// Geometry-aware propagation: each fine weight is read off the affine
/// function through the (position, weight) pairs of the three nearest coarse
/// sites. The dual potential is smooth where the transport is smooth, so this
/// starts a fine level with O(h^2) error instead of the O(h) of copying the
/// parent's weight; degenerate neighbor triangles fall back to the parent.
std::vector<double> propagate_weights(const DiscreteMeasure& fine,
                                      const DiscreteMeasure& coarse,
                                      const std::vector<double>& w_coarse,
                                      const std::vector<int>& parent_map);

struct LevelStats {
  int level = 0;
  int support_size = 0;
  int iterations = 0;
  int evaluations = 0;
  int subpixel_factor = 1;
  double final_mistransported_mass = 0.0;
  std::optional<double> w1_to_finer;  // only when log_level_w1 is on
};

struct MultiscaleStats {
  std::vector<LevelStats> levels;  // coarsest first
  int total_evaluations = 0;
};

SolveReport solve_multiscale(const DensityGrid& grid, const DiscreteMeasure& nu,
                             const SolverConfig& config,
                             const HierarchyOptions& options = {},
                             MultiscaleStats* stats = nullptr,
                             const IterationLog& log = {});

/// Weighted K-means quantization of the density: support points are cluster
/// centers of the positive pixel centers, masses the summed pixel masses.
DiscreteMeasure quantize(const DensityGrid& grid, int n, uint64_t seed,
                         int max_iterations = 100);

}  // namespace sdot1
