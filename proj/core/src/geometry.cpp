#include "sdot1/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sdot1/parallel.hpp"

namespace sdot1 {

void SiteSet::validate() const {
  if (points.empty()) throw std::invalid_argument("SiteSet: no sites");
  if (points.size() != weights.size()) {
    throw std::invalid_argument("SiteSet: points/weights size mismatch");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("SiteSet: non-finite weight");
  }
}

int weighted_argmin(Point x, const SiteSet& sites) {
  int best = 0;
  double best_value = distance(x, sites.points[0]) - sites.weights[0];
  for (int j = 1; j < sites.size(); ++j) {
    const double value = distance(x, sites.points[j]) - sites.weights[j];
    if (value < best_value) {
      best_value = value;
      best = j;
    }
  }
  return best;
}

SiteIndex::SiteIndex(const SiteSet& sites) : sites_(sites) {
  std::vector<int> order(sites.points.size());
  std::iota(order.begin(), order.end(), 0);
  nodes_.reserve(2 * order.size());
  root_ = build(order, 0, static_cast<int>(order.size()), 0);
}

int SiteIndex::build(std::vector<int>& order, int begin, int end, int axis) {
  Node node;
  node.box_x_min = node.box_y_min = std::numeric_limits<double>::infinity();
  node.box_x_max = node.box_y_max = -std::numeric_limits<double>::infinity();
  node.max_weight = -std::numeric_limits<double>::infinity();
  for (int i = begin; i < end; ++i) {
    const Point p = sites_.points[order[i]];
    node.box_x_min = std::min(node.box_x_min, p.x);
    node.box_x_max = std::max(node.box_x_max, p.x);
    node.box_y_min = std::min(node.box_y_min, p.y);
    node.box_y_max = std::max(node.box_y_max, p.y);
    node.max_weight = std::max(node.max_weight, sites_.weights[order[i]]);
  }
  if (end - begin == 1) {
    node.site = order[begin];
  } else {
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](int a, int b) {
                       const Point pa = sites_.points[a];
                       const Point pb = sites_.points[b];
                       if (axis == 0) return pa.x < pb.x || (pa.x == pb.x && pa.y < pb.y);
                       return pa.y < pb.y || (pa.y == pb.y && pa.x < pb.x);
                     });
    node.left = build(order, begin, mid, 1 - axis);
    node.right = build(order, mid, end, 1 - axis);
  }
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

namespace {

// Distance from x to the box, computed with the same primitive operations
// as point distances so the bound never exceeds any in-box site distance.
double box_distance(Point x, double x0, double y0, double x1, double y1) {
  const double dx = x.x < x0 ? x0 - x.x : (x.x > x1 ? x.x - x1 : 0.0);
  const double dy = x.y < y0 ? y0 - x.y : (x.y > y1 ? x.y - y1 : 0.0);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

void SiteIndex::search(int index, Point x, double& best_value, int& best_index) const {
  const Node& node = nodes_[index];
  if (node.site >= 0) {
    const double value = distance(x, sites_.points[node.site]) - sites_.weights[node.site];
    if (value < best_value || (value == best_value && node.site < best_index)) {
      best_value = value;
      best_index = node.site;
    }
    return;
  }
  const Node& left = nodes_[node.left];
  const Node& right = nodes_[node.right];
  const double lb_left =
      box_distance(x, left.box_x_min, left.box_y_min, left.box_x_max, left.box_y_max) -
      left.max_weight;
  const double lb_right =
      box_distance(x, right.box_x_min, right.box_y_min, right.box_x_max, right.box_y_max) -
      right.max_weight;
  const int first = lb_left <= lb_right ? node.left : node.right;
  const int second = lb_left <= lb_right ? node.right : node.left;
  const double lb_first = std::min(lb_left, lb_right);
  const double lb_second = std::max(lb_left, lb_right);
  if (lb_first <= best_value) search(first, x, best_value, best_index);
  if (lb_second <= best_value) search(second, x, best_value, best_index);
}

int SiteIndex::nearest(Point x, int32_t hint) const {
  double best_value = std::numeric_limits<double>::infinity();
  int best_index = sites_.size();
  if (hint >= 0 && hint < sites_.size()) {
    best_value = distance(x, sites_.points[hint]) - sites_.weights[hint];
    best_index = hint;
  }
  search(root_, x, best_value, best_index);
  return best_index;
}

int subpixel_count(int n_sites, const DensityGrid& grid, int max_k) {
  if (n_sites < 1) throw std::invalid_argument("subpixel_count: need at least one site");
  const double pixels = static_cast<double>(grid.nx()) * grid.ny();
  const double needed = 1000.0 * n_sites / pixels;
  int k = std::max(1, static_cast<int>(std::ceil(std::sqrt(needed))));
  while (static_cast<double>(k) * k < needed) ++k;  // guard against fp rounding
  return std::min(k, max_k);
}

Rasterization rasterize(const DensityGrid& grid, const SiteSet& sites, int k,
                        const RasterizeOptions& options) {
  sites.validate();
  if (k < 1) throw std::invalid_argument("rasterize: subpixel factor must be >= 1");

  const int n = sites.size();
  Rasterization out;
  out.subpixel_factor = k;
  out.cols = grid.nx() * k;
  out.rows = grid.ny() * k;
  out.assignment.assign(static_cast<size_t>(out.cols) * out.rows, kUnassigned);
  out.cell_mass.assign(n, 0.0);
  out.cell_cost.assign(n, 0.0);

  const double sub_side = grid.pixel_side() / k;
  const double sub_area = sub_side * sub_side;

  // Acceleration by block candidate filtering: one scan over all sites at a
  // block's center keeps exactly the sites that can win somewhere in the
  // block. For any subpixel center x in the block, v_j differs from its
  // value at the block center by at most the block circumradius R (values
  // are 1-Lipschitz in x), so a site with v_j(center) > v_best(center) + 2R
  // never attains the minimum in the block. The slack absorbs rounding,
  // keeping the result bit-identical to the exhaustive scan; the per-site
  // scans amortize over block * block subpixels.
  constexpr int kBlock = 8;
  const int n_block_cols = (out.cols + kBlock - 1) / kBlock;
  const double block_radius =
      std::hypot(0.5 * (kBlock - 1) * sub_side, 0.5 * (kBlock - 1) * sub_side);

  // Per-row accumulators, reduced in row order afterwards, so the result is
  // identical regardless of the thread count.
  std::vector<double> row_mass(static_cast<size_t>(out.rows) * n, 0.0);
  std::vector<double> row_cost(static_cast<size_t>(out.rows) * n, 0.0);

  // candidate sites of one block, laid out for a contiguous scan
  struct BlockCandidates {
    std::vector<int> index;
    std::vector<double> x, y, w;
  };

  auto process_rows = [&](int row_begin, int row_end) {
    std::vector<BlockCandidates> candidates(options.accelerate ? n_block_cols : 0);
    std::vector<double> values(options.accelerate ? n : 0);
    int cached_block_row = -1;
    for (int r = row_begin; r < row_end; ++r) {
      const int pixel_row = r / k;
      const double y = grid.y_max() - (r + 0.5) * sub_side;
      double* masses = row_mass.data() + static_cast<size_t>(r) * n;
      double* costs = row_cost.data() + static_cast<size_t>(r) * n;
      if (options.accelerate && r / kBlock != cached_block_row) {
        cached_block_row = r / kBlock;
        const double cy =
            grid.y_max() - (cached_block_row + 0.5) * (kBlock * sub_side);
        for (int b = 0; b < n_block_cols; ++b) {
          const Point center{grid.x_min() + (b + 0.5) * (kBlock * sub_side), cy};
          double best = std::numeric_limits<double>::infinity();
          for (int j = 0; j < n; ++j) {
            values[j] = distance(center, sites.points[j]) - sites.weights[j];
            best = std::min(best, values[j]);
          }
          const double cutoff = best + 2.0 * block_radius + 1e-12;
          auto& list = candidates[b];
          list.index.clear();
          list.x.clear();
          list.y.clear();
          list.w.clear();
          for (int j = 0; j < n; ++j) {
            if (values[j] <= cutoff) {
              list.index.push_back(j);
              list.x.push_back(sites.points[j].x);
              list.y.push_back(sites.points[j].y);
              list.w.push_back(sites.weights[j]);
            }
          }
        }
      }
      for (int c = 0; c < out.cols; ++c) {
        const double density = grid.value(c / k, pixel_row);
        if (density == 0.0) continue;
        const Point center{grid.x_min() + (c + 0.5) * sub_side, y};
        int j;
        double site_distance;
        if (options.accelerate) {
          const auto& list = candidates[c / kBlock];
          const size_t count = list.index.size();
          for (size_t t = 0; t < count; ++t) {  // branch-free, vectorizes
            const double dx = center.x - list.x[t];
            const double dy = center.y - list.y[t];
            values[t] = std::sqrt(dx * dx + dy * dy) - list.w[t];
          }
          double best = values[0];
          size_t t_best = 0;
          for (size_t t = 1; t < count; ++t) {
            if (values[t] < best) {  // candidates are in index order: ties keep the smallest
              best = values[t];
              t_best = t;
            }
          }
          j = list.index[t_best];
          // recomputed rather than recovered as best + w so the cost matches
          // the exhaustive path bit for bit
          site_distance = distance(center, {list.x[t_best], list.y[t_best]});
        } else {
          j = weighted_argmin(center, sites);
          site_distance = distance(center, sites.points[j]);
        }
        out.assignment[static_cast<size_t>(r) * out.cols + c] = j;
        const double mass = density * sub_area;
        masses[j] += mass;
        costs[j] += mass * site_distance;
      }
    }
  };

  parallel_chunks(out.rows, options.threads, process_rows);

  for (int r = 0; r < out.rows; ++r) {
    const double* masses = row_mass.data() + static_cast<size_t>(r) * n;
    const double* costs = row_cost.data() + static_cast<size_t>(r) * n;
    for (int j = 0; j < n; ++j) {
      out.cell_mass[j] += masses[j];
      out.cell_cost[j] += costs[j];
    }
  }
  return out;
}

}  // namespace sdot1
