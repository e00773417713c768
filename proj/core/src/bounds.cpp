#include "sdot1/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace sdot1 {

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::quantization_exact: return "quantization_exact";
    case ErrorKind::quantization_bound: return "quantization_bound";
    case ErrorKind::blur_bound: return "blur_bound";
  }
  return "unknown";
}

ErrorReport quantization_error_exact(const DensityGrid& fine, const DiscreteMeasure& nu,
                                     const SolverConfig& config,
                                     const HierarchyOptions& hierarchy) {
  const SolveReport report = solve_multiscale(fine, nu, config, hierarchy);
  if (!report.converged) {
    throw std::runtime_error("quantization_error_exact: solver did not converge (" +
                             report.termination_reason + ")");
  }
  return {report.w1_cost, ErrorKind::quantization_exact};
}

ErrorReport quantization_error_bound(const DensityGrid& fine, const DiscreteMeasure& nu,
                                     const std::vector<int32_t>& pixel_to_atom) {
  const size_t pixel_count = static_cast<size_t>(fine.nx()) * fine.ny();
  if (pixel_to_atom.size() != pixel_count) {
    throw std::invalid_argument("quantization_error_bound: assignment size mismatch");
  }
  std::vector<double> pulled(nu.size(), 0.0);
  double value = 0.0;
  for (int r = 0; r < fine.ny(); ++r) {
    for (int c = 0; c < fine.nx(); ++c) {
      const double mass = fine.pixel_mass(c, r);
      if (mass <= 0.0) continue;
      const int32_t atom = pixel_to_atom[static_cast<size_t>(r) * fine.nx() + c];
      if (atom < 0 || atom >= nu.size()) {
        throw std::invalid_argument(
            "quantization_error_bound: positive pixel without a valid atom");
      }
      pulled[atom] += mass;
      value += mass * distance(fine.pixel_center(c, r), nu.point(atom));
    }
  }
  for (int j = 0; j < nu.size(); ++j) {
    if (std::abs(pulled[j] - nu.mass(j)) > 1e-6 * nu.total_mass()) {
      throw std::invalid_argument(
          "quantization_error_bound: pulled masses do not match the target measure");
    }
  }
  return {value, ErrorKind::quantization_bound};
}

ErrorReport blur_error_bound(const DiscreteMeasure& mu_discrete, double pixel_side) {
  if (!(pixel_side > 0.0)) {
    throw std::invalid_argument("blur_error_bound: pixel side must be positive");
  }
  return {mu_discrete.total_mass() * pixel_side * kUnitSquareMeanCenterDistance,
          ErrorKind::blur_bound};
}

}  // namespace sdot1
