#include "sdot1/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sdot1 {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string hex_color(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = v - c;
  return {static_cast<int>(std::lround((r + m) * 255)),
          static_cast<int>(std::lround((g + m) * 255)),
          static_cast<int>(std::lround((b + m) * 255))};
}

void emit_cells(std::ostringstream& svg, const std::vector<int32_t>& assignment,
                int cols, int rows, double cell_w, double cell_h) {
  // merge horizontal runs of equal assignment into single rects
  for (int r = 0; r < rows; ++r) {
    int c = 0;
    while (c < cols) {
      const int32_t site = assignment[static_cast<size_t>(r) * cols + c];
      int end = c + 1;
      while (end < cols && assignment[static_cast<size_t>(r) * cols + end] == site) ++end;
      if (site != kUnassigned) {
        svg << "<rect x=\"" << fmt(c * cell_w) << "\" y=\"" << fmt(r * cell_h)
            << "\" width=\"" << fmt((end - c) * cell_w) << "\" height=\""
            << fmt(cell_h) << "\" fill=\"" << hex_color(site_color(site)) << "\"/>\n";
      }
      c = end;
    }
  }
}

}  // namespace

Rgb site_color(int site) {
  const double hue = std::fmod(0.618033988749895 * (site + 1), 1.0);
  return hsv_to_rgb(hue, 0.55, 0.85);
}

std::string render_partition_svg(const Rasterization& raster, const DensityGrid& grid,
                                 const std::vector<Point>& sites,
                                 const std::vector<double>* site_masses,
                                 const RenderOptions& options) {
  const double aspect = (grid.y_max() - grid.y_min()) / (grid.x_max() - grid.x_min());
  const double width = options.width_px;
  const double height = width * aspect;
  const double cell_w = width / raster.cols;
  const double cell_h = height / raster.rows;

  auto to_px = [&](Point p) -> Point {
    return {(p.x - grid.x_min()) / (grid.x_max() - grid.x_min()) * width,
            (grid.y_max() - p.y) / (grid.y_max() - grid.y_min()) * height};
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
      << fmt(height) << "\">\n";
  svg << "<rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"#ffffff\"/>\n";
  emit_cells(svg, raster.assignment, raster.cols, raster.rows, cell_w, cell_h);

  const int n = static_cast<int>(sites.size());

  if (options.draw_arrows) {
    // mass-weighted centroid per cell
    std::vector<double> sx(n, 0.0), sy(n, 0.0), sm(n, 0.0);
    const double sub_side = grid.pixel_side() / raster.subpixel_factor;
    for (int r = 0; r < raster.rows; ++r) {
      const double y = grid.y_max() - (r + 0.5) * sub_side;
      for (int c = 0; c < raster.cols; ++c) {
        const int32_t j = raster.at(c, r);
        if (j == kUnassigned) continue;
        const double mass =
            grid.value(c / raster.subpixel_factor, r / raster.subpixel_factor);
        sx[j] += mass * (grid.x_min() + (c + 0.5) * sub_side);
        sy[j] += mass * y;
        sm[j] += mass;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (sm[j] <= 0.0) continue;
      // nucleus outside its own cell?
      const Point site = sites[j];
      const int sc = std::clamp(
          static_cast<int>((site.x - grid.x_min()) / sub_side), 0, raster.cols - 1);
      const int sr = std::clamp(
          static_cast<int>((grid.y_max() - site.y) / sub_side), 0, raster.rows - 1);
      if (raster.at(sc, sr) == j) continue;
      const Point from = to_px({sx[j] / sm[j], sy[j] / sm[j]});
      const Point to = to_px(site);
      svg << "<line x1=\"" << fmt(from.x) << "\" y1=\"" << fmt(from.y) << "\" x2=\""
          << fmt(to.x) << "\" y2=\"" << fmt(to.y)
          << "\" stroke=\"#808080\" stroke-width=\"1.5\"/>\n";
    }
  }

  if (options.draw_sites) {
    double max_mass = 1.0;
    if (site_masses) {
      max_mass = 0.0;
      for (double m : *site_masses) max_mass = std::max(max_mass, m);
    }
    const double max_radius = 0.012 * width;
    for (int j = 0; j < n; ++j) {
      const Point p = to_px(sites[j]);
      const double radius =
          site_masses ? max_radius * std::sqrt((*site_masses)[j] / max_mass) : max_radius * 0.5;
      svg << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\""
          << fmt(radius) << "\" fill=\"#000000\"/>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

std::string render_assignment_svg(const std::vector<int32_t>& assignment, int cols,
                                  int rows, const RenderOptions& options) {
  const double width = options.width_px;
  const double height = width * (static_cast<double>(rows) / cols);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
      << fmt(height) << "\">\n";
  svg << "<rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"#ffffff\"/>\n";
  emit_cells(svg, assignment, cols, rows, width / cols, height / rows);
  svg << "</svg>\n";
  return svg.str();
}

std::vector<double> cell_eccentricities(const DensityGrid& grid,
                                        const Rasterization& raster, int n_sites) {
  std::vector<double> sx(n_sites, 0.0), sy(n_sites, 0.0), sm(n_sites, 0.0);
  std::vector<double> sxx(n_sites, 0.0), syy(n_sites, 0.0), sxy(n_sites, 0.0);
  const double sub_side = grid.pixel_side() / raster.subpixel_factor;
  for (int r = 0; r < raster.rows; ++r) {
    const double y = grid.y_max() - (r + 0.5) * sub_side;
    for (int c = 0; c < raster.cols; ++c) {
      const int32_t j = raster.at(c, r);
      if (j == kUnassigned) continue;
      const double mass =
          grid.value(c / raster.subpixel_factor, r / raster.subpixel_factor);
      const double x = grid.x_min() + (c + 0.5) * sub_side;
      sx[j] += mass * x;
      sy[j] += mass * y;
      sxx[j] += mass * x * x;
      syy[j] += mass * y * y;
      sxy[j] += mass * x * y;
      sm[j] += mass;
    }
  }
  std::vector<double> out(n_sites, 1.0);
  for (int j = 0; j < n_sites; ++j) {
    if (sm[j] <= 0.0) continue;
    const double mx = sx[j] / sm[j];
    const double my = sy[j] / sm[j];
    const double cxx = sxx[j] / sm[j] - mx * mx;
    const double cyy = syy[j] / sm[j] - my * my;
    const double cxy = sxy[j] / sm[j] - mx * my;
    const double tr = cxx + cyy;
    const double det = cxx * cyy - cxy * cxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lmax = tr / 2.0 + disc;
    const double lmin = tr / 2.0 - disc;
    if (lmin > 1e-18) out[j] = std::sqrt(lmax / lmin);
  }
  return out;
}

}  // namespace sdot1
