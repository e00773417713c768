#pragma once

#include <vector>

#include "sdot1/measures.hpp"

namespace sdot1 {

struct GaussianComponent {
  Point mean;
  double variance = 1.0;  // isotropic
  double weight = 1.0;
};

/// Gaussian mixture evaluated at pixel centers (truncated to the rectangle)
/// and normalized to the given total mass.
DensityGrid gaussian_mixture_grid(double x_min, double y_min, double x_max, double y_max,
                                  int nx, int ny,
                                  const std::vector<GaussianComponent>& components,
                                  double total_mass = 1.0);

}  // namespace sdot1
