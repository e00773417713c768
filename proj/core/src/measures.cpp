#include "sdot1/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace sdot1 {

namespace {

double sum_values(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

DensityGrid::DensityGrid(double x_min, double y_min, double x_max, double y_max,
                         int nx, int ny, std::vector<double> values)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max),
      nx_(nx), ny_(ny), values_(std::move(values)) {
  if (nx_ <= 0 || ny_ <= 0) {
    throw std::invalid_argument("DensityGrid: pixel counts must be positive");
  }
  if (!(x_max_ > x_min_) || !(y_max_ > y_min_)) {
    throw std::invalid_argument("DensityGrid: empty rectangle");
  }
  if (values_.size() != static_cast<size_t>(nx_) * static_cast<size_t>(ny_)) {
    throw std::invalid_argument("DensityGrid: value count does not match nx*ny");
  }
  const double side_x = (x_max_ - x_min_) / nx_;
  const double side_y = (y_max_ - y_min_) / ny_;
  if (std::abs(side_x - side_y) > 1e-9 * std::max(side_x, side_y)) {
    throw std::invalid_argument("DensityGrid: non-square pixels");
  }
  side_ = side_x;
  bool any_positive = false;
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("DensityGrid: values must be finite and nonnegative");
    }
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) {
    throw std::invalid_argument("DensityGrid: zero total mass");
  }
  total_mass_ = sum_values(values_) * pixel_area();
  if (!std::isfinite(total_mass_) || total_mass_ <= 0.0) {
    throw std::invalid_argument("DensityGrid: zero total mass");
  }
}

double DensityGrid::diameter() const {
  const double dx = x_max_ - x_min_;
  const double dy = y_max_ - y_min_;
  return std::sqrt(dx * dx + dy * dy);
}

DensityGrid DensityGrid::scaled(double factor) const {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("DensityGrid::scaled: factor must be positive");
  }
  std::vector<double> v = values_;
  for (double& x : v) x *= factor;
  return DensityGrid(x_min_, y_min_, x_max_, y_max_, nx_, ny_, std::move(v));
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<double> masses)
    : points_(std::move(points)), masses_(std::move(masses)) {
  if (points_.empty()) {
    throw std::invalid_argument("DiscreteMeasure: empty support");
  }
  if (points_.size() != masses_.size()) {
    throw std::invalid_argument("DiscreteMeasure: points/masses size mismatch");
  }
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("DiscreteMeasure: masses must be positive and finite");
    }
  }
  std::map<std::pair<double, double>, int> seen;
  for (const Point& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("DiscreteMeasure: non-finite support point");
    }
    if (++seen[{p.x, p.y}] > 1) {
      throw std::invalid_argument("DiscreteMeasure: duplicate support points");
    }
  }
  total_mass_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("DiscreteMeasure::scaled: factor must be positive");
  }
  std::vector<double> m = masses_;
  for (double& x : m) x *= factor;
  return DiscreteMeasure(points_, std::move(m));
}

DensityGrid normalize(const DensityGrid& grid, double target_mass) {
  if (!(target_mass > 0.0)) {
    throw std::invalid_argument("normalize: target mass must be positive");
  }
  return grid.scaled(target_mass / grid.total_mass());
}

DiscreteMeasure normalize(const DiscreteMeasure& nu, double target_mass) {
  if (!(target_mass > 0.0)) {
    throw std::invalid_argument("normalize: target mass must be positive");
  }
  const double factor = target_mass / nu.total_mass();
  std::vector<double> m = nu.masses();
  double partial = 0.0;
  for (size_t j = 0; j + 1 < m.size(); ++j) {
    m[j] *= factor;
    partial += m[j];
  }
  // last mass absorbs the rounding so the total is exact
  m.back() = target_mass - partial;
  if (!(m.back() > 0.0)) {
    m.back() = nu.masses().back() * factor;
  }
  return DiscreteMeasure(nu.points(), std::move(m));
}

BalanceCheck check_balance(double mu_mass, double nu_mass, double tol) {
  BalanceCheck b;
  b.mu_mass = mu_mass;
  b.nu_mass = nu_mass;
  const double denom = std::max(mu_mass, nu_mass);
  b.relative_gap = denom > 0.0 ? std::abs(mu_mass - nu_mass) / denom : 0.0;
  b.ok = b.relative_gap <= tol;
  return b;
}

BalanceCheck check_balance(const DensityGrid& mu, const DiscreteMeasure& nu, double tol) {
  return check_balance(mu.total_mass(), nu.total_mass(), tol);
}

}  // namespace sdot1
