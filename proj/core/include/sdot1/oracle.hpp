#pragma once

#include <vector>

#include "sdot1/measures.hpp"

namespace sdot1 {

/// Balanced discrete-discrete transport instance. Points may repeat (the
/// oracle also serves the invariance checks, where a common measure is
/// appended to both sides).
struct DiscreteTransportProblem {
  std::vector<Point> source_points;
  std::vector<double> source_masses;
  std::vector<Point> target_points;
  std::vector<double> target_masses;

  void validate() const;
};

struct TransportPlan {
  struct Entry {
    int from = 0;
    int to = 0;
    double mass = 0.0;
  };
  std::vector<Entry> entries;
  double cost = 0.0;                      // W_p value (p-th root applied)
  std::vector<double> source_potential;   // optimal duals for verification
  std::vector<double> target_potential;
};

/// Exact optimal transport via successive shortest paths on the bipartite
/// flow network. Size guard: source*target count must stay <= 1e7.
TransportPlan discrete_wp(const DiscreteTransportProblem& problem, int p);

inline TransportPlan discrete_w1(const DiscreteTransportProblem& problem) {
  return discrete_wp(problem, 1);
}

struct InvarianceCheck {
  double w1_base = 0.0;
  double w1_shifted = 0.0;
  double gap = 0.0;
};

/// W1(alpha + mu, alpha + nu) vs. W1(mu, nu).
InvarianceCheck check_additive_invariance(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          const DiscreteMeasure& alpha);

struct ScalingCheck {
  double lhs = 0.0;  // W_p(c mu, c nu)
  double rhs = 0.0;  // c^{1/p} W_p(mu, nu)
  double gap = 0.0;
};

ScalingCheck check_scaling_law(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               double c, int p = 1);

}  // namespace sdot1
