#include "sdot1/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace sdot1 {

ObjectiveValue evaluate(const DiscreteMeasure& nu, const std::vector<double>& weights,
                        const Rasterization& raster) {
  const int n = nu.size();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("evaluate: weight/measure dimension mismatch");
  }
  ObjectiveValue value;
  value.cell_mass = raster.cell_mass;
  value.gradient.resize(n);
  double phi = 0.0;
  double cost = 0.0;
  for (int j = 0; j < n; ++j) {
    phi += -nu.mass(j) * weights[j] - (raster.cell_cost[j] - weights[j] * raster.cell_mass[j]);
    cost += raster.cell_cost[j];
    value.gradient[j] = -nu.mass(j) + raster.cell_mass[j];
  }
  if (!std::isfinite(phi)) {
    throw std::runtime_error("evaluate: non-finite objective value");
  }
  value.phi = phi;
  value.cost = cost;
  return value;
}

ObjectiveValue evaluate(const DensityGrid& grid, const DiscreteMeasure& nu,
                        const std::vector<double>& weights, int k,
                        const RasterizeOptions& options) {
  const SiteSet sites{nu.points(), weights};
  return evaluate(nu, weights, rasterize(grid, sites, k, options));
}

double mistransported_mass(const ObjectiveValue& value) {
  double sum = 0.0;
  for (double g : value.gradient) sum += std::abs(g);
  return sum / 2.0;
}

double transport_cost(const ObjectiveValue& value) { return value.cost; }

}  // namespace sdot1
