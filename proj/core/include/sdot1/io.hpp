#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdot1/measures.hpp"

namespace sdot1 {

struct Bounds {
  double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;
};

/// Loads a density from a PGM (P2/P5) image or a CSV grid. For CSV, the
/// physical bounds come from a JSON sidecar next to the file (path + ".json")
/// unless bounds are given explicitly. Without any bounds the domain defaults
/// to a unit-aspect rectangle with pixel side 1/max(nx, ny).
DensityGrid load_density(const std::string& path,
                         std::optional<Bounds> bounds = std::nullopt);

DensityGrid load_density_pgm(const std::string& path,
                             std::optional<Bounds> bounds = std::nullopt);
DensityGrid load_density_csv(const std::string& path,
                             std::optional<Bounds> bounds = std::nullopt);

/// Writes the grid values as CSV (one row per line, max-precision doubles,
/// so reloading reproduces them bit-identically) plus a JSON bounds sidecar.
void write_density_csv(const DensityGrid& grid, const std::string& path);

/// CSV with header "x,y,mass".
DiscreteMeasure load_discrete_csv(const std::string& path);
void write_discrete_csv(const DiscreteMeasure& nu, const std::string& path);

/// Points-only CSV (header "x,y"; a mass column, if present, is ignored).
std::vector<Point> load_points_csv(const std::string& path);

struct PgmImage {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<uint16_t> pixels;  // row-major, top row first
};

PgmImage load_pgm(const std::string& path);
void write_pgm(const PgmImage& image, const std::string& path, bool binary = true);

}  // namespace sdot1
