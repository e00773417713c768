#include <random>

#include <benchmark/benchmark.h>

#include "sdot1/geometry.hpp"
#include "sdot1/objective.hpp"
#include "sdot1/synthetic.hpp"

namespace {

sdot1::DensityGrid make_grid(int side) {
  return sdot1::gaussian_mixture_grid(0, 0, 1, 1, side, side,
                                      {{{0.35, 0.4}, 0.02, 1.0}, {{0.7, 0.65}, 0.05, 0.6}});
}

sdot1::SiteSet make_sites(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sdot1::SiteSet sites;
  for (int j = 0; j < n; ++j) {
    sites.points.push_back({u(rng), u(rng)});
    sites.weights.push_back(0.02 * u(rng));
  }
  return sites;
}

void BM_RasterizeKd(benchmark::State& state) {
  const auto grid = make_grid(static_cast<int>(state.range(0)));
  const auto sites = make_sites(static_cast<int>(state.range(1)), 7);
  const int k = sdot1::subpixel_count(sites.size(), grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdot1::rasterize(grid, sites, k));
  }
}
BENCHMARK(BM_RasterizeKd)->Args({128, 100})->Args({256, 400})->Args({512, 1000});

void BM_RasterizeBrute(benchmark::State& state) {
  const auto grid = make_grid(static_cast<int>(state.range(0)));
  const auto sites = make_sites(static_cast<int>(state.range(1)), 7);
  const int k = sdot1::subpixel_count(sites.size(), grid);
  sdot1::RasterizeOptions options;
  options.accelerate = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdot1::rasterize(grid, sites, k, options));
  }
}
BENCHMARK(BM_RasterizeBrute)->Args({128, 100})->Args({256, 400});

void BM_Evaluate(benchmark::State& state) {
  const auto grid = make_grid(256);
  const auto sites = make_sites(static_cast<int>(state.range(0)), 11);
  std::vector<double> masses(sites.size(), grid.total_mass() / sites.size());
  const sdot1::DiscreteMeasure nu(sites.points, masses);
  const int k = sdot1::subpixel_count(sites.size(), grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdot1::evaluate(grid, nu, sites.weights, k));
  }
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(1000);

void BM_SiteIndexQueries(benchmark::State& state) {
  const auto sites = make_sites(static_cast<int>(state.range(0)), 3);
  const sdot1::SiteIndex index(sites);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<sdot1::Point> queries(4096);
  for (auto& q : queries) q = {u(rng), u(rng)};
  for (auto _ : state) {
    for (const auto& q : queries) benchmark::DoNotOptimize(index.nearest(q));
  }
}
BENCHMARK(BM_SiteIndexQueries)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
