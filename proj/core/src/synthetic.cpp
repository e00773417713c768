#include "sdot1/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace sdot1 {

DensityGrid gaussian_mixture_grid(double x_min, double y_min, double x_max, double y_max,
                                  int nx, int ny,
                                  const std::vector<GaussianComponent>& components,
                                  double total_mass) {
  if (components.empty()) {
    throw std::invalid_argument("gaussian_mixture_grid: no components");
  }
  const double side = (x_max - x_min) / nx;
  std::vector<double> values(static_cast<size_t>(nx) * ny, 0.0);
  for (int r = 0; r < ny; ++r) {
    const double y = y_max - (r + 0.5) * side;
    for (int c = 0; c < nx; ++c) {
      const double x = x_min + (c + 0.5) * side;
      double density = 0.0;
      for (const auto& comp : components) {
        const double dx = x - comp.mean.x;
        const double dy = y - comp.mean.y;
        density += comp.weight *
                   std::exp(-(dx * dx + dy * dy) / (2.0 * comp.variance)) /
                   (2.0 * M_PI * comp.variance);
      }
      values[static_cast<size_t>(r) * nx + c] = density;
    }
  }
  DensityGrid grid(x_min, y_min, x_max, y_max, nx, ny, std::move(values));
  return normalize(grid, total_mass);
}

}  // namespace sdot1
