#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "sdot1/io.hpp"
#include "sdot1/measures.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sdot1_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("pgm with a single positive pixel") {
  const auto path = temp_file("one_pixel.pgm");
  write_text(path, "P2\n2 2\n255\n0 0\n0 255\n");
  const auto grid = sdot1::load_density(path.string(), sdot1::Bounds{0, 0, 1, 1});
  CHECK(grid.nx() == 2);
  CHECK(grid.ny() == 2);
  int positive = 0;
  for (double v : grid.values())
    if (v > 0) ++positive;
  CHECK(positive == 1);
  CHECK(grid.total_mass() == doctest::Approx(255 * 0.25).epsilon(1e-12));
}

TEST_CASE("all-zero pgm is rejected") {
  const auto path = temp_file("zeros.pgm");
  write_text(path, "P2\n2 2\n255\n0 0\n0 0\n");
  CHECK_THROWS_WITH_AS(sdot1::load_density(path.string()),
                       doctest::Contains("zero total mass"), std::invalid_argument);
}

TEST_CASE("non-square pixels are rejected unless the bounds are consistent") {
  std::vector<double> values(static_cast<size_t>(256) * 196, 1.0);
  CHECK_THROWS_WITH_AS(
      sdot1::DensityGrid(0, 0, 1, 1, 256, 196, values),
      doctest::Contains("non-square pixels"), std::invalid_argument);
  // a 196-row image fits a square-pixel domain of height 196/256
  const sdot1::DensityGrid ok(0, 0, 1, 0.765625, 256, 196, values);
  CHECK(ok.pixel_side() == doctest::Approx(1.0 / 256).epsilon(1e-14));
}

TEST_CASE("binary and ascii pgm round trip") {
  sdot1::PgmImage img;
  img.width = 3;
  img.height = 2;
  img.max_value = 255;
  img.pixels = {0, 10, 250, 3, 128, 77};
  for (bool binary : {true, false}) {
    const auto path = temp_file(binary ? "rt.pgm" : "rt_ascii.pgm");
    sdot1::write_pgm(img, path.string(), binary);
    const auto back = sdot1::load_pgm(path.string());
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);
  }
}

TEST_CASE("discrete measure normalization") {
  sdot1::DiscreteMeasure nu({{0, 0}, {1, 0}}, {2.0, 2.0});
  const auto scaled = sdot1::normalize(nu, 1.0);
  CHECK(scaled.mass(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scaled.mass(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scaled.total_mass() == 1.0);

  sdot1::DiscreteMeasure already({{0, 0}, {1, 0}}, {0.5, 0.5});
  const auto same = sdot1::normalize(already, 1.0);
  CHECK(same.mass(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(same.mass(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("grid normalization divides by the current total") {
  const auto path = temp_file("one_pixel2.pgm");
  write_text(path, "P2\n2 2\n255\n0 0\n0 255\n");
  auto grid = sdot1::load_density(path.string(), sdot1::Bounds{0, 0, 1, 1});
  const auto unit = sdot1::normalize(grid, 1.0);
  CHECK(unit.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 0; i < grid.values().size(); ++i) {
    CHECK(unit.values()[i] == doctest::Approx(grid.values()[i] / 63.75).epsilon(1e-12));
  }
}

TEST_CASE("balance check") {
  CHECK(sdot1::check_balance(1.0, 1.0).ok);
  CHECK(sdot1::check_balance(1.0, 1.0).relative_gap == 0.0);
  const auto off = sdot1::check_balance(1.0, 0.98);
  CHECK(off.relative_gap == doctest::Approx(0.02).epsilon(1e-12));
  CHECK_FALSE(off.ok);
  CHECK(sdot1::check_balance(10.0, 10.0 + 1e-7).ok);
}

TEST_CASE("distinct support points are enforced") {
  CHECK_THROWS_WITH_AS(sdot1::DiscreteMeasure({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5}),
                       doctest::Contains("duplicate support points"),
                       std::invalid_argument);
}

TEST_CASE("density csv round trip is bit identical") {
  std::mt19937_64 rng(5);
  const auto inst = testutil::random_instance(rng, 7, 3);
  const auto path = temp_file("grid.csv");
  sdot1::write_density_csv(inst.grid, path.string());
  const auto back = sdot1::load_density(path.string());
  CHECK(back.nx() == inst.grid.nx());
  CHECK(back.ny() == inst.grid.ny());
  CHECK(back.values() == inst.grid.values());
  CHECK(back.x_max() == inst.grid.x_max());
  CHECK(back.y_max() == inst.grid.y_max());
}

TEST_CASE("discrete csv round trip is bit identical") {
  sdot1::DiscreteMeasure nu({{0.123456789012345, 0.9}, {1.0 / 3.0, 0.2}},
                            {0.1, 1.0 / 7.0});
  const auto path = temp_file("nu.csv");
  sdot1::write_discrete_csv(nu, path.string());
  const auto back = sdot1::load_discrete_csv(path.string());
  REQUIRE(back.size() == 2);
  CHECK(back.points()[0].x == nu.points()[0].x);
  CHECK(back.points()[1].x == nu.points()[1].x);
  CHECK(back.masses() == nu.masses());
}

TEST_CASE("malformed csv reports the offending line") {
  const auto path = temp_file("bad.csv");
  write_text(path, "x,y,mass\n0.1,0.2,0.3\n0.4,oops,0.5\n");
  try {
    sdot1::load_discrete_csv(path.string());
    FAIL("expected a parse error");
  } catch (const std::exception& e) {
    const std::string message = e.what();
    CHECK(message.find(path.string()) != std::string::npos);
    CHECK(message.find("3") != std::string::npos);  // line number
  }
}
