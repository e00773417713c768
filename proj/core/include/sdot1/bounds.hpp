#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdot1/measures.hpp"
#include "sdot1/multiscale.hpp"

namespace sdot1 {

/// Mean distance from the center of a unit square to a uniform point in it,
/// (sqrt(2) + asinh(1)) / 6, stored to 1e-6 (checked against a quadrature
/// oracle in the tests).
inline constexpr double kUnitSquareMeanCenterDistance = 0.3825979;

enum class ErrorKind {
  quantization_exact,
  quantization_bound,
  blur_bound,
};

struct ErrorReport {
  double value = 0.0;
  ErrorKind kind = ErrorKind::quantization_exact;
};

std::string to_string(ErrorKind kind);

/// W1 between the fine density and its discretization, computed by running
/// the semi-discrete solver on that pair.
ErrorReport quantization_error_exact(const DensityGrid& fine, const DiscreteMeasure& nu,
                                     const SolverConfig& config,
                                     const HierarchyOptions& hierarchy = {});

/// Upper bound from an explicit pixel-to-atom assignment: sum of
/// pixel_mass * distance(pixel center, assigned atom). The pulled masses
/// must reproduce nu within 1e-6 relative.
ErrorReport quantization_error_bound(const DensityGrid& fine, const DiscreteMeasure& nu,
                                     const std::vector<int32_t>& pixel_to_atom);

/// Uniform-square blur bound: total_mass * pixel_side * kappa.
ErrorReport blur_error_bound(const DiscreteMeasure& mu_discrete, double pixel_side);

}  // namespace sdot1
