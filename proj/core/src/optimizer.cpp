#include "sdot1/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace sdot1 {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm1(const std::vector<double>& a) {
  double sum = 0.0;
  for (double v : a) sum += std::abs(v);
  return sum;
}

// -g normalized to unit l1 length. The gradient carries mass units, so the
// raw negative gradient would make the iterates depend on the total mass;
// normalizing keeps the trajectory invariant under scaling both measures.
std::vector<double> scaled_steepest(const std::vector<double>& gradient) {
  std::vector<double> d(gradient.size());
  const double scale = norm1(gradient);
  for (size_t i = 0; i < d.size(); ++i) d[i] = -gradient[i] / scale;
  return d;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) {
    throw std::invalid_argument("SolverConfig: armijo_c1 must be in (0,1)");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("SolverConfig: backtrack_factor must be in (0,1)");
  }
  if (memory < 1) throw std::invalid_argument("SolverConfig: memory must be >= 1");
}

std::vector<double> two_loop_direction(const std::vector<double>& gradient,
                                       const std::vector<CorrectionPair>& history) {
  std::vector<double> q(gradient.size());
  for (size_t i = 0; i < q.size(); ++i) q[i] = -gradient[i];
  if (history.empty()) return q;

  const int m = static_cast<int>(history.size());
  std::vector<double> alpha(m);
  std::vector<double> rho(m);
  for (int i = m - 1; i >= 0; --i) {
    rho[i] = 1.0 / dot(history[i].y, history[i].s);
    alpha[i] = rho[i] * dot(history[i].s, q);
    for (size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * history[i].y[j];
  }
  const auto& newest = history.back();
  const double gamma = dot(newest.s, newest.y) / dot(newest.y, newest.y);
  for (double& v : q) v *= gamma;
  for (int i = 0; i < m; ++i) {
    const double beta = rho[i] * dot(history[i].y, q);
    for (size_t j = 0; j < q.size(); ++j) q[j] += (alpha[i] - beta) * history[i].s[j];
  }
  return q;
}

SolveReport minimize(const DensityGrid& grid, const DiscreteMeasure& nu,
                     const std::vector<double>& w0, const SolverConfig& config,
                     const IterationLog& log) {
  config.validate();
  const int n = nu.size();
  if (static_cast<int>(w0.size()) != n) {
    throw std::invalid_argument("minimize: weight/measure dimension mismatch");
  }

  const int k = config.subpixel_factor > 0
                    ? config.subpixel_factor
                    : subpixel_count(n, grid, config.max_subpixel_factor);

  SolveReport report;
  report.subpixel_factor = k;

  std::vector<double> w = w0;
  ObjectiveValue current = evaluate(grid, nu, w, k, config.raster);
  ++report.evaluations;
  report.phi_history.push_back(current.phi);

  std::deque<CorrectionPair> history;

  std::string reason;
  bool converged = false;
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    const double mm = mistransported_mass(current);
    if (mm <= config.epsilon) {
      converged = true;
      reason = "converged";
      break;
    }

    std::vector<double> direction;
    bool steepest = history.empty();
    if (steepest) {
      direction = scaled_steepest(current.gradient);
    } else {
      std::vector<CorrectionPair> pairs(history.begin(), history.end());
      direction = two_loop_direction(current.gradient, pairs);
    }
    double slope = dot(current.gradient, direction);
    if (!(slope < 0.0) && !steepest) {
      direction = scaled_steepest(current.gradient);
      slope = dot(current.gradient, direction);
      steepest = true;
    }

    double accepted_step = 0.0;
    ObjectiveValue next;
    std::vector<double> w_next;
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double t = config.initial_step;
      for (int ls = 0; ls < config.max_line_search_steps; ++ls) {
        w_next = w;
        for (int j = 0; j < n; ++j) w_next[j] += t * direction[j];
        next = evaluate(grid, nu, w_next, k, config.raster);
        ++report.evaluations;
        if (next.phi <= current.phi + config.armijo_c1 * t * slope) {
          accepted = true;
          accepted_step = t;
          break;
        }
        t *= config.backtrack_factor;
      }
      if (!accepted && !steepest) {
        // fall back to steepest descent once
        direction = scaled_steepest(current.gradient);
        slope = dot(current.gradient, direction);
        steepest = true;
      } else {
        break;
      }
    }

    if (!accepted) {
      reason = "stalled";
      break;
    }

    CorrectionPair pair;
    pair.s.resize(n);
    pair.y.resize(n);
    for (int j = 0; j < n; ++j) {
      pair.s[j] = w_next[j] - w[j];
      pair.y[j] = next.gradient[j] - current.gradient[j];
    }
    // non-positive curvature pairs would break the two-loop recursion;
    // the threshold is relative so it is invariant under measure scaling
    if (dot(pair.s, pair.y) > 1e-12 * norm1(pair.s) * norm1(pair.y)) {
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > config.memory) history.pop_front();
    }

    w = std::move(w_next);
    current = std::move(next);
    report.phi_history.push_back(current.phi);
    if (log) {
      log({iter + 1, current.phi, mistransported_mass(current), accepted_step});
    }
  }

  if (reason.empty()) reason = "max_iterations";

  const double w_min = *std::min_element(w.begin(), w.end());
  for (double& v : w) v -= w_min;

  report.final_w = std::move(w);
  report.iterations = iter;
  report.final_mistransported_mass = mistransported_mass(current);
  report.w1_cost = transport_cost(current);
  report.converged = converged;
  report.termination_reason = reason;
  report.cell_mass = current.cell_mass;
  return report;
}

}  // namespace sdot1
