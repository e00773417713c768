#pragma once

#include <vector>

#include "sdot1/geometry.hpp"
#include "sdot1/measures.hpp"

namespace sdot1 {

/// Value of the convex dual objective at a weight vector, together with the
/// gradient, the rasterized cell masses and the transport cost.
struct ObjectiveValue {
  double phi = 0.0;
  std::vector<double> gradient;
  std::vector<double> cell_mass;
  double cost = 0.0;
};

ObjectiveValue evaluate(const DensityGrid& grid, const DiscreteMeasure& nu,
                        const std::vector<double>& weights, int k,
                        const RasterizeOptions& options = {});

/// Same, from a rasterization already computed for these weights.
ObjectiveValue evaluate(const DiscreteMeasure& nu, const std::vector<double>& weights,
                        const Rasterization& raster);

/// ||gradient||_1 / 2: the total mass currently assigned to the wrong cells.
double mistransported_mass(const ObjectiveValue& value);

/// Sum of per-cell transport costs; the W1 estimate once the mistransported
/// mass is below the stopping threshold.
double transport_cost(const ObjectiveValue& value);

}  // namespace sdot1
