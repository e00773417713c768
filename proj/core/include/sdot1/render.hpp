#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdot1/geometry.hpp"
#include "sdot1/measures.hpp"

namespace sdot1 {

struct RenderOptions {
  int width_px = 800;
  bool draw_sites = true;
  bool draw_arrows = true;  // centroid -> nucleus, only when the nucleus is outside its cell
};

struct Rgb {
  int r = 0, g = 0, b = 0;
};

/// Deterministic per-site palette (golden-ratio hue walk).
Rgb site_color(int site);

/// Renders the rasterized partition: colored cells, optional site discs with
/// areas proportional to the masses, optional gray arrows for cells that do
/// not contain their nucleus. Output is byte-stable for identical inputs.
std::string render_partition_svg(const Rasterization& raster, const DensityGrid& grid,
                                 const std::vector<Point>& sites,
                                 const std::vector<double>* site_masses,
                                 const RenderOptions& options = {});

/// Colorizes a bare assignment image (no geometry available, so no markers).
std::string render_assignment_svg(const std::vector<int32_t>& assignment, int cols,
                                  int rows, const RenderOptions& options = {});

/// Per-cell elongation proxy: sqrt of the ratio of the principal second
/// moments of the assigned subpixel mass (1 for isotropic cells, large for
/// elongated ones; 1 for empty or degenerate cells).
std::vector<double> cell_eccentricities(const DensityGrid& grid,
                                        const Rasterization& raster, int n_sites);

}  // namespace sdot1
