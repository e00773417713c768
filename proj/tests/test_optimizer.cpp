#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sdot1/objective.hpp"
#include "sdot1/optimizer.hpp"
#include "sdot1/oracle.hpp"

TEST_CASE("two-loop recursion against the dense update") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 5;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<sdot1::CorrectionPair> history;
    const int pairs = 1 + static_cast<int>(rng() % 4);
    for (int p = 0; p < pairs; ++p) {
      sdot1::CorrectionPair pair;
      pair.s.resize(n);
      pair.y.resize(n);
      double sy = 0.0;
      do {
        for (int i = 0; i < n; ++i) {
          pair.s[i] = normal(rng);
          pair.y[i] = normal(rng);
        }
        sy = 0.0;
        for (int i = 0; i < n; ++i) sy += pair.s[i] * pair.y[i];
      } while (sy <= 0.1);  // curvature condition, as the optimizer enforces
      history.push_back(pair);
    }
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = normal(rng);

    const auto fast = sdot1::two_loop_direction(g, history);
    const auto dense = testutil::dense_bfgs_direction(g, history);
    for (int i = 0; i < n; ++i) {
      CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("two-loop recursion degenerate cases") {
  const std::vector<double> g{0.3, -0.7, 2.0};
  const auto d = sdot1::two_loop_direction(g, {});
  CHECK(d[0] == -0.3);
  CHECK(d[1] == 0.7);
  CHECK(d[2] == -2.0);

  // s == y makes every factor collapse to the identity
  sdot1::CorrectionPair pair;
  pair.s = {1.0, 2.0, -1.0};
  pair.y = pair.s;
  const auto d2 = sdot1::two_loop_direction(g, {pair});
  for (int i = 0; i < 3; ++i) CHECK(d2[i] == doctest::Approx(-g[i]).epsilon(1e-13));
}

TEST_CASE("single site converges immediately") {
  const auto grid = testutil::uniform_grid(8, 8);
  const sdot1::DiscreteMeasure nu({{0.1, 0.9}}, {grid.total_mass()});
  sdot1::SolverConfig config;
  const auto report = sdot1::minimize(grid, nu, {5.0}, config);
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK(report.termination_reason == "converged");
  CHECK(report.final_w[0] == 0.0);  // shift-normalized
}

TEST_CASE("symmetric two-site instance converges at iteration zero") {
  const auto grid = testutil::uniform_grid(16, 16);
  const sdot1::DiscreteMeasure nu({{0.25, 0.5}, {0.75, 0.5}}, {0.5, 0.5});
  sdot1::SolverConfig config;
  config.epsilon = 1e-9;
  config.subpixel_factor = 2;
  const auto report = sdot1::minimize(grid, nu, {0.0, 0.0}, config);
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK(report.cell_mass[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("asymmetric two-site instance matches the exact discrete solution") {
  const auto grid = testutil::uniform_grid(64, 64);
  const sdot1::DiscreteMeasure nu({{0.25, 0.5}, {0.75, 0.5}}, {0.75, 0.25});
  sdot1::SolverConfig config;
  config.epsilon = 1e-3;
  config.subpixel_factor = 1;
  const auto report = sdot1::minimize(grid, nu, {0.0, 0.0}, config);
  REQUIRE(report.converged);
  CHECK(report.cell_mass[0] == doctest::Approx(0.75).epsilon(2e-3));
  CHECK(report.cell_mass[1] == doctest::Approx(0.25).epsilon(6e-3));

  const auto problem = testutil::atoms_vs_target(grid, nu, 1);
  const auto plan = sdot1::discrete_w1(problem);
  CHECK(std::abs(report.w1_cost - plan.cost) <= 1e-3 * grid.diameter());
}

TEST_CASE("final weights are shift-normalized and the report is consistent") {
  std::mt19937_64 rng(77);
  const auto inst = testutil::random_instance(rng, 24, 8);
  sdot1::SolverConfig config;
  config.epsilon = 5e-3;
  const auto report = sdot1::minimize(inst.grid, inst.nu, std::vector<double>(8, 0.0), config);
  REQUIRE(report.converged);
  CHECK(*std::min_element(report.final_w.begin(), report.final_w.end()) == 0.0);
  CHECK(report.final_mistransported_mass <= config.epsilon);
  CHECK(report.phi_history.size() == static_cast<size_t>(report.iterations) + 1);
  // phi never increases along the accepted iterates
  for (size_t i = 1; i < report.phi_history.size(); ++i) {
    CHECK(report.phi_history[i] <= report.phi_history[i - 1] + 1e-12);
  }
  // re-evaluating at the reported weights reproduces the reported quantities
  const auto value =
      sdot1::evaluate(inst.grid, inst.nu, report.final_w, report.subpixel_factor);
  CHECK(value.cost == doctest::Approx(report.w1_cost).epsilon(1e-12));
  CHECK(sdot1::mistransported_mass(value) ==
        doctest::Approx(report.final_mistransported_mass).epsilon(1e-12));
}

TEST_CASE("iteration log sees every accepted step") {
  std::mt19937_64 rng(78);
  const auto inst = testutil::random_instance(rng, 24, 8);
  sdot1::SolverConfig config;
  config.epsilon = 5e-3;
  int calls = 0;
  const auto report = sdot1::minimize(inst.grid, inst.nu, std::vector<double>(8, 0.0),
                                      config, [&](const sdot1::IterationRecord& rec) {
                                        ++calls;
                                        CHECK(rec.iteration == calls);
                                        CHECK(rec.step_size > 0.0);
                                      });
  CHECK(calls == report.iterations);
}
