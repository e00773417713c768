#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sdot1/bounds.hpp"
#include "sdot1/geometry.hpp"
#include "sdot1/multiscale.hpp"
#include "sdot1/synthetic.hpp"

namespace {

/// Midpoint quadrature of the mean distance from the center of the unit
/// square to a uniform point of it.
double quadrature_center_distance(int steps) {
  double sum = 0.0;
  const double h = 1.0 / steps;
  for (int r = 0; r < steps; ++r) {
    for (int c = 0; c < steps; ++c) {
      sum += sdot1::distance({(c + 0.5) * h, (r + 0.5) * h}, {0.5, 0.5});
    }
  }
  return sum / (static_cast<double>(steps) * steps);
}

}  // namespace

TEST_CASE("mean center distance constant against quadrature") {
  const double reference = quadrature_center_distance(4096);
  CHECK(std::abs(sdot1::kUnitSquareMeanCenterDistance - reference) <= 1e-6);
  // closed form (sqrt(2) + asinh(1)) / 6
  const double closed = (std::sqrt(2.0) + std::asinh(1.0)) / 6.0;
  CHECK(std::abs(sdot1::kUnitSquareMeanCenterDistance - closed) <= 1e-7);
}

TEST_CASE("quantizing onto every positive pixel is nearly free") {
  std::mt19937_64 rng(9);
  const auto inst = testutil::random_instance(rng, 8, 3);
  const int positive = 64;
  const auto nu = sdot1::quantize(inst.grid, positive, 0);
  sdot1::SolverConfig config;
  config.epsilon = 1e-3;
  const auto report = sdot1::quantization_error_exact(inst.grid, nu, config);
  CHECK(report.kind == sdot1::ErrorKind::quantization_exact);
  const double half_diagonal = inst.grid.pixel_side() * std::sqrt(2.0) / 2.0;
  CHECK(report.value <= half_diagonal * inst.grid.total_mass() + 1e-9);
}

TEST_CASE("single-atom quantization error is the mean center distance") {
  const auto grid = testutil::uniform_grid(64, 64);
  const sdot1::DiscreteMeasure nu({{0.5, 0.5}}, {1.0});
  sdot1::SolverConfig config;
  const auto report = sdot1::quantization_error_exact(grid, nu, config);
  CHECK(report.value == doctest::Approx(0.3826).epsilon(5e-3));
}

TEST_CASE("assignment bound is tight for a converged partition") {
  std::mt19937_64 rng(31);
  const auto inst = testutil::random_instance(rng, 24, 4);
  sdot1::SolverConfig config;
  config.epsilon = 1e-3;
  config.subpixel_factor = 1;  // pixel-level assignment for the bound
  const auto report =
      sdot1::minimize(inst.grid, inst.nu, std::vector<double>(4, 0.0), config);
  REQUIRE(report.converged);
  const auto raster =
      sdot1::rasterize(inst.grid, {inst.nu.points(), report.final_w}, 1);

  // the measure actually pulled by this partition: the bound applies exactly
  const sdot1::DiscreteMeasure pulled(inst.nu.points(), raster.cell_mass);
  const auto bound = sdot1::quantization_error_bound(inst.grid, pulled, raster.assignment);
  CHECK(bound.kind == sdot1::ErrorKind::quantization_bound);
  const auto exact = sdot1::quantization_error_exact(inst.grid, pulled, config);
  const double mass = inst.grid.total_mass();
  const double slack = 2 * config.epsilon * inst.grid.diameter() * mass +
                       inst.grid.pixel_side() * std::sqrt(2.0) * mass;
  CHECK(bound.value >= exact.value - 1e-9);
  CHECK(bound.value <= exact.value + slack);
}

TEST_CASE("crossing two equal cells strictly worsens the bound") {
  const auto grid = testutil::uniform_grid(2, 2);
  const sdot1::DiscreteMeasure nu({{0.25, 0.5}, {0.75, 0.5}}, {0.5, 0.5});
  const std::vector<int32_t> straight = {0, 1, 0, 1};
  const std::vector<int32_t> crossed = {1, 0, 1, 0};
  const auto good = sdot1::quantization_error_bound(grid, nu, straight);
  const auto bad = sdot1::quantization_error_bound(grid, nu, crossed);
  CHECK(bad.value > good.value);
}

TEST_CASE("all mass exactly at the atoms gives a zero bound") {
  sdot1::DensityGrid grid(0, 0, 1, 1, 2, 2, {2.0, 0, 0, 2.0});
  const sdot1::DiscreteMeasure nu({grid.pixel_center(0, 0), grid.pixel_center(1, 1)},
                                  {grid.pixel_mass(0, 0), grid.pixel_mass(1, 1)});
  std::vector<int32_t> assignment = {0, sdot1::kUnassigned, sdot1::kUnassigned, 1};
  const auto report = sdot1::quantization_error_bound(grid, nu, assignment);
  CHECK(report.value == 0.0);
}

TEST_CASE("blur bound formula") {
  const sdot1::DiscreteMeasure unit({{0.5, 0.5}}, {1.0});
  const auto a = sdot1::blur_error_bound(unit, 1.0);
  CHECK(a.kind == sdot1::ErrorKind::blur_bound);
  CHECK(a.value == doctest::Approx(0.3825979).epsilon(1e-6));

  const auto small = sdot1::blur_error_bound(unit, 0.001);
  CHECK(small.value == doctest::Approx(0.0003825979).epsilon(1e-6));

  const sdot1::DiscreteMeasure heavy({{0.5, 0.5}}, {10.0});
  const auto b = sdot1::blur_error_bound(heavy, 0.01);
  CHECK(b.value == doctest::Approx(0.03825979).epsilon(1e-6));
}

TEST_CASE("error kind names") {
  CHECK(sdot1::to_string(sdot1::ErrorKind::quantization_exact) == "quantization_exact");
  CHECK(sdot1::to_string(sdot1::ErrorKind::quantization_bound) == "quantization_bound");
  CHECK(sdot1::to_string(sdot1::ErrorKind::blur_bound) == "blur_bound");
}
