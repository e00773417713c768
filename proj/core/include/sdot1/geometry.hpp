#pragma once

#include <cstdint>
#include <vector>

#include "sdot1/measures.hpp"

namespace sdot1 {

/// Sites of an additively weighted Voronoi tessellation: each site j wins
/// the points x with ||x - y_j|| - w_j minimal.
struct SiteSet {
  std::vector<Point> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;
};

inline constexpr int32_t kUnassigned = -1;

/// Exhaustive weighted argmin; ties broken by smallest site index.
int weighted_argmin(Point x, const SiteSet& sites);

/// kd-tree over the sites with per-subtree weight maxima. Queries return
/// exactly the same index as weighted_argmin, including the tie rule: a
/// subtree is pruned only when its lower bound strictly exceeds the best
/// value found so far.
class SiteIndex {
 public:
  explicit SiteIndex(const SiteSet& sites);

  int nearest(Point x) const { return nearest(x, kUnassigned); }
  int nearest(Point x, int32_t hint) const;

 private:
  struct Node {
    double box_x_min, box_y_min, box_x_max, box_y_max;
    double max_weight;
    int site = -1;      // leaf payload
    int left = -1, right = -1;
  };

  int build(std::vector<int>& order, int begin, int end, int axis);
  void search(int node, Point x, double& best_value, int& best_index) const;

  const SiteSet& sites_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Smallest k >= 1 with (nx*ny)*k^2 >= 1000*n, capped at max_k.
int subpixel_count(int n_sites, const DensityGrid& grid, int max_k = 64);

struct RasterizeOptions {
  bool accelerate = true;    // per-block candidate filtering instead of exhaustive scan
  int threads = 1;           // 0 = hardware concurrency
};

/// Subpixel-center assignment of the grid to the sites, with per-cell mass
/// and cost accumulators. Assignment is row-major over subpixel rows (top
/// first); zero-density subpixels stay kUnassigned.
struct Rasterization {
  int subpixel_factor = 1;
  int cols = 0, rows = 0;
  std::vector<int32_t> assignment;
  std::vector<double> cell_mass;
  std::vector<double> cell_cost;

  int32_t at(int col, int row) const { return assignment[row * cols + col]; }
};

Rasterization rasterize(const DensityGrid& grid, const SiteSet& sites, int k,
                        const RasterizeOptions& options = {});

}  // namespace sdot1
