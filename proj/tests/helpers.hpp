#pragma once

// Shared fixtures and independent reference computations for the tests.

#include <cmath>
#include <random>
#include <vector>

#include "sdot1/geometry.hpp"
#include "sdot1/measures.hpp"
#include "sdot1/oracle.hpp"
#include "sdot1/optimizer.hpp"

namespace testutil {

inline sdot1::DensityGrid uniform_grid(int nx, int ny, double x_min = 0.0,
                                       double y_min = 0.0, double x_max = 1.0,
                                       double y_max = 1.0, double total_mass = 1.0) {
  std::vector<double> values(static_cast<size_t>(nx) * ny, 1.0);
  sdot1::DensityGrid grid(x_min, y_min, x_max, y_max, nx, ny, std::move(values));
  return sdot1::normalize(grid, total_mass);
}

struct RandomInstance {
  sdot1::DensityGrid grid;
  sdot1::DiscreteMeasure nu;
};

/// Random positive density on the unit square with random interior sites and
/// random masses summing exactly to the grid mass.
inline RandomInstance random_instance(std::mt19937_64& rng, int grid_side, int n) {
  std::uniform_real_distribution<double> level(0.2, 1.2);
  std::uniform_real_distribution<double> coord(0.05, 0.95);
  std::uniform_real_distribution<double> mass(0.2, 1.0);
  std::vector<double> values(static_cast<size_t>(grid_side) * grid_side);
  for (double& v : values) v = level(rng);
  sdot1::DensityGrid grid(0, 0, 1, 1, grid_side, grid_side, std::move(values));
  grid = sdot1::normalize(grid, 1.0);
  std::vector<sdot1::Point> points(n);
  std::vector<double> masses(n);
  for (int j = 0; j < n; ++j) {
    points[j] = {coord(rng), coord(rng)};
    masses[j] = mass(rng);
  }
  sdot1::DiscreteMeasure nu(points, masses);
  return {grid, sdot1::normalize(nu, grid.total_mass())};
}

inline std::vector<double> random_weights(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> w(n);
  for (double& v : w) v = u(rng);
  return w;
}

/// Flattens the subpixel rasterization support into a discrete measure, so
/// the exact discrete solver can be run on the very atoms the solver saw.
inline sdot1::DiscreteTransportProblem atoms_vs_target(const sdot1::DensityGrid& grid,
                                                       const sdot1::DiscreteMeasure& nu,
                                                       int k) {
  sdot1::DiscreteTransportProblem problem;
  const double sub_side = grid.pixel_side() / k;
  const double sub_mass_factor = grid.pixel_area() / (k * k);
  for (int r = 0; r < grid.ny() * k; ++r) {
    for (int c = 0; c < grid.nx() * k; ++c) {
      const double m = grid.value(c / k, r / k) * sub_mass_factor;
      if (m <= 0.0) continue;
      problem.source_points.push_back(
          {grid.x_min() + (c + 0.5) * sub_side, grid.y_max() - (r + 0.5) * sub_side});
      problem.source_masses.push_back(m);
    }
  }
  problem.target_points = nu.points();
  problem.target_masses = nu.masses();
  return problem;
}

/// Midpoint-rule quadrature of the mean weighted-Voronoi distance over a
/// uniform unit-mass density: (1/N^2) sum over midpoints of min_j (||x-y_j||).
inline double quadrature_mean_min_distance(double x_min, double y_min, double x_max,
                                           double y_max, const sdot1::SiteSet& sites,
                                           int steps) {
  double sum = 0.0;
  const double hx = (x_max - x_min) / steps;
  const double hy = (y_max - y_min) / steps;
  for (int r = 0; r < steps; ++r) {
    for (int c = 0; c < steps; ++c) {
      const sdot1::Point x{x_min + (c + 0.5) * hx, y_min + (r + 0.5) * hy};
      double best = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < sites.points.size(); ++j) {
        best = std::min(best, sdot1::distance(x, sites.points[j]));
      }
      sum += best;
    }
  }
  return sum / (static_cast<double>(steps) * steps);
}

/// Dense-matrix BFGS reference: applies the textbook inverse-Hessian update
/// pair by pair and returns -H g. Cross-checks the two-loop recursion.
inline std::vector<double> dense_bfgs_direction(
    const std::vector<double>& gradient, const std::vector<sdot1::CorrectionPair>& history) {
  const size_t n = gradient.size();
  std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
  double gamma = 1.0;
  if (!history.empty()) {
    const auto& newest = history.back();
    double sy = 0.0, yy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      sy += newest.s[i] * newest.y[i];
      yy += newest.y[i] * newest.y[i];
    }
    gamma = sy / yy;
  }
  for (size_t i = 0; i < n; ++i) H[i][i] = gamma;
  for (const auto& pair : history) {
    double sy = 0.0;
    for (size_t i = 0; i < n; ++i) sy += pair.s[i] * pair.y[i];
    const double rho = 1.0 / sy;
    // H' = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        A[i][j] = (i == j ? 1.0 : 0.0) - rho * pair.s[i] * pair.y[j];
      }
    }
    std::vector<std::vector<double>> HA(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (size_t l = 0; l < n; ++l) sum += A[i][l] * H[l][j];
        HA[i][j] = sum;
      }
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (size_t l = 0; l < n; ++l) sum += HA[i][l] * A[j][l];
        H[i][j] = sum + rho * pair.s[i] * pair.s[j];
      }
    }
  }
  std::vector<double> direction(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) direction[i] -= H[i][j] * gradient[j];
  }
  return direction;
}

}  // namespace testutil
