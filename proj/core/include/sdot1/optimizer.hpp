#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sdot1/geometry.hpp"
#include "sdot1/measures.hpp"
#include "sdot1/objective.hpp"

namespace sdot1 {

struct SolverConfig {
  double epsilon = 0.05;            // stopping threshold on mistransported mass
  int memory = 10;                  // stored correction pairs
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  int max_iterations = 5000;
  int max_line_search_steps = 40;
  double initial_step = 1.0;
  int subpixel_factor = 0;          // 0 = auto via subpixel_count
  int max_subpixel_factor = 64;
  RasterizeOptions raster;

  void validate() const;
};

struct SolveReport {
  std::vector<double> final_w;      // shift-normalized: min entry is 0
  int iterations = 0;
  std::vector<double> phi_history;  // one entry per accepted iterate, initial included
  double final_mistransported_mass = 0.0;
  double w1_cost = 0.0;
  bool converged = false;
  std::string termination_reason;
  int evaluations = 0;
  int subpixel_factor = 1;
  std::vector<double> cell_mass;
};

struct IterationRecord {
  int iteration = 0;
  double phi = 0.0;
  double mistransported_mass = 0.0;
  double step_size = 0.0;
};

using IterationLog = std::function<void(const IterationRecord&)>;

struct CorrectionPair {
  std::vector<double> s;  // step difference
  std::vector<double> y;  // gradient difference
};

/// L-BFGS two-loop recursion; history ordered oldest first. With empty
/// history the direction is the negative gradient.
std::vector<double> two_loop_direction(const std::vector<double>& gradient,
                                       const std::vector<CorrectionPair>& history);

SolveReport minimize(const DensityGrid& grid, const DiscreteMeasure& nu,
                     const std::vector<double>& w0, const SolverConfig& config,
                     const IterationLog& log = {});

}  // namespace sdot1
