#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sdot1/render.hpp"

TEST_CASE("site colors are deterministic and distinct for neighbours") {
  const auto a = sdot1::site_color(0);
  const auto b = sdot1::site_color(0);
  CHECK(a.r == b.r);
  CHECK(a.g == b.g);
  CHECK(a.b == b.b);
  const auto c = sdot1::site_color(1);
  CHECK((a.r != c.r || a.g != c.g || a.b != c.b));
}

TEST_CASE("single site renders one colored region and one disc") {
  const auto grid = testutil::uniform_grid(8, 8);
  const std::vector<sdot1::Point> sites{{0.5, 0.5}};
  const auto raster = sdot1::rasterize(grid, {sites, {0.0}}, 1);
  std::vector<double> masses{1.0};
  const auto svg = sdot1::render_partition_svg(raster, grid, sites, &masses);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  // one merged rect per row plus background
  size_t rects = 0;
  for (size_t pos = svg.find("<rect"); pos != std::string::npos;
       pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  CHECK(rects == 1 + 8);
  CHECK(svg.find("<line") == std::string::npos);  // nucleus inside its cell
}

TEST_CASE("two symmetric sites produce two color regions") {
  const auto grid = testutil::uniform_grid(8, 8);
  const std::vector<sdot1::Point> sites{{0.25, 0.5}, {0.75, 0.5}};
  const auto raster = sdot1::rasterize(grid, {sites, {0.0, 0.0}}, 1);
  std::vector<double> masses{0.5, 0.5};
  const auto svg = sdot1::render_partition_svg(raster, grid, sites, &masses);
  // both palette entries appear
  char buf0[16], buf1[16];
  const auto c0 = sdot1::site_color(0);
  const auto c1 = sdot1::site_color(1);
  std::snprintf(buf0, sizeof(buf0), "#%02x%02x%02x", c0.r, c0.g, c0.b);
  std::snprintf(buf1, sizeof(buf1), "#%02x%02x%02x", c1.r, c1.g, c1.b);
  CHECK(svg.find(buf0) != std::string::npos);
  CHECK(svg.find(buf1) != std::string::npos);
}

TEST_CASE("rendering is byte stable") {
  std::mt19937_64 rng(41);
  const auto inst = testutil::random_instance(rng, 16, 12);
  const auto w = testutil::random_weights(rng, 12, 0.1);
  const auto raster = sdot1::rasterize(inst.grid, {inst.nu.points(), w}, 2);
  std::vector<double> masses = inst.nu.masses();
  const auto first = sdot1::render_partition_svg(raster, inst.grid, inst.nu.points(), &masses);
  const auto second = sdot1::render_partition_svg(raster, inst.grid, inst.nu.points(), &masses);
  CHECK(first == second);
  CHECK(first.find("</svg>") != std::string::npos);
}

TEST_CASE("assignment-only rendering") {
  const std::vector<int32_t> assignment{0, 0, 1, 1, sdot1::kUnassigned, 1};
  const auto svg = sdot1::render_assignment_svg(assignment, 3, 2);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<circle") == std::string::npos);
}

TEST_CASE("cell eccentricity separates round cells from stripes") {
  const auto grid = testutil::uniform_grid(32, 32);
  // site 0 owns a narrow vertical stripe: put site 1 close to it on both sides
  const std::vector<sdot1::Point> sites{{0.5, 0.5}, {0.1, 0.5}};
  const auto raster = sdot1::rasterize(grid, {sites, {0.0, 0.0}}, 2);
  const auto ecc = sdot1::cell_eccentricities(grid, raster, 2);
  REQUIRE(ecc.size() == 2);
  CHECK(ecc[0] >= 1.0);
  CHECK(ecc[1] >= 1.0);

  // a genuinely elongated cell: two sites very close together horizontally
  const std::vector<sdot1::Point> tight{{0.49, 0.5}, {0.51, 0.5}};
  const auto raster2 = sdot1::rasterize(grid, {tight, {0.0, 0.0}}, 2);
  const auto ecc2 = sdot1::cell_eccentricities(grid, raster2, 2);
  // each half-plane cell is taller than wide
  CHECK(ecc2[0] > 1.5);
}
