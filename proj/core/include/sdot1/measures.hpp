#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdot1 {

inline constexpr const char* kVersion = "0.1.0";

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Piecewise-constant density on a rectangle, stored row-major with the
/// top row (maximal y) first. Each value is a density level (mass per unit
/// area) on one square pixel. Immutable after construction.
class DensityGrid {
 public:
  DensityGrid(double x_min, double y_min, double x_max, double y_max,
              int nx, int ny, std::vector<double> values);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  double pixel_side() const { return side_; }
  double pixel_area() const { return side_ * side_; }
  double total_mass() const { return total_mass_; }
  double diameter() const;

  const std::vector<double>& values() const { return values_; }

  // row 0 is the top of the domain (y close to y_max)
  double value(int col, int row) const { return values_[row * nx_ + col]; }
  double pixel_mass(int col, int row) const { return value(col, row) * pixel_area(); }
  Point pixel_center(int col, int row) const {
    return {x_min_ + (col + 0.5) * side_, y_max_ - (row + 0.5) * side_};
  }

  DensityGrid scaled(double factor) const;

 private:
  double x_min_, y_min_, x_max_, y_max_;
  int nx_, ny_;
  double side_;
  double total_mass_;
  std::vector<double> values_;
};

/// Finitely supported measure: distinct support points with positive masses.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> points, std::vector<double> masses);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& masses() const { return masses_; }
  Point point(int j) const { return points_[j]; }
  double mass(int j) const { return masses_[j]; }
  double total_mass() const { return total_mass_; }

  DiscreteMeasure scaled(double factor) const;

 private:
  std::vector<Point> points_;
  std::vector<double> masses_;
  double total_mass_;
};

struct BalanceCheck {
  double mu_mass = 0.0;
  double nu_mass = 0.0;
  double relative_gap = 0.0;
  bool ok = false;
};

DensityGrid normalize(const DensityGrid& grid, double target_mass);
DiscreteMeasure normalize(const DiscreteMeasure& nu, double target_mass);

BalanceCheck check_balance(const DensityGrid& mu, const DiscreteMeasure& nu,
                           double tol = 1e-6);
BalanceCheck check_balance(double mu_mass, double nu_mass, double tol = 1e-6);

}  // namespace sdot1
