#include "sdot1/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace sdot1 {

namespace {

constexpr double kSizeGuard = 1e7;

double pair_cost(Point a, Point b, int p) {
  const double d = distance(a, b);
  return p == 1 ? d : d * d;
}

}  // namespace

void DiscreteTransportProblem::validate() const {
  if (source_points.empty() || target_points.empty()) {
    throw std::invalid_argument("DiscreteTransportProblem: empty side");
  }
  if (source_points.size() != source_masses.size() ||
      target_points.size() != target_masses.size()) {
    throw std::invalid_argument("DiscreteTransportProblem: points/masses size mismatch");
  }
  double source_total = 0.0, target_total = 0.0;
  for (double m : source_masses) {
    if (!(m > 0.0)) throw std::invalid_argument("DiscreteTransportProblem: nonpositive mass");
    source_total += m;
  }
  for (double m : target_masses) {
    if (!(m > 0.0)) throw std::invalid_argument("DiscreteTransportProblem: nonpositive mass");
    target_total += m;
  }
  const double scale = std::max(source_total, target_total);
  if (std::abs(source_total - target_total) > 1e-9 * scale) {
    throw std::invalid_argument("DiscreteTransportProblem: unbalanced masses");
  }
  if (static_cast<double>(source_points.size()) * target_points.size() > kSizeGuard) {
    throw std::invalid_argument("DiscreteTransportProblem: size guard exceeded");
  }
}

TransportPlan discrete_wp(const DiscreteTransportProblem& problem, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("discrete_wp: p must be 1 or 2");
  problem.validate();

  const int m = static_cast<int>(problem.source_points.size());
  const int n = static_cast<int>(problem.target_points.size());

  std::vector<double> cost(static_cast<size_t>(m) * n);
  double max_cost = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double c = pair_cost(problem.source_points[i], problem.target_points[j], p);
      cost[static_cast<size_t>(i) * n + j] = c;
      max_cost = std::max(max_cost, c);
    }
  }

  std::vector<double> supply = problem.source_masses;
  std::vector<double> demand = problem.target_masses;
  const double total =
      std::accumulate(supply.begin(), supply.end(), 0.0);
  const double mass_floor = total * 1e-14;

  // flow[i] holds the positive entries of row i; back_edges[j] lists rows
  // that currently send mass to column j (lazily pruned).
  std::vector<std::map<int, double>> flow(m);
  std::vector<std::vector<int>> back_edges(n);

  // node ids: sources 0..m-1, targets m..m+n-1
  std::vector<double> potential(m + n, 0.0);
  const double inf = std::numeric_limits<double>::infinity();

  const int max_augmentations = 50 * (m + n) + 100;
  int augmentations = 0;
  while (true) {
    const double remaining = std::accumulate(supply.begin(), supply.end(), 0.0);
    if (remaining <= mass_floor) break;
    if (++augmentations > max_augmentations) {
      throw std::runtime_error("discrete_wp: augmentation limit exceeded");
    }

    std::vector<double> dist(m + n, inf);
    std::vector<int> parent(m + n, -1);
    std::vector<char> done(m + n, 0);
    using QueueItem = std::pair<double, int>;
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
    for (int i = 0; i < m; ++i) {
      if (supply[i] > mass_floor) {
        dist[i] = 0.0;
        queue.emplace(0.0, i);
      }
    }

    int found_target = -1;
    double found_distance = inf;
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (done[v]) continue;
      done[v] = 1;
      if (v >= m && demand[v - m] > mass_floor) {
        found_target = v - m;
        found_distance = d;
        break;
      }
      if (v < m) {
        const int i = v;
        const double* row = cost.data() + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
          const int u = m + j;
          if (done[u]) continue;
          const double nd = d + row[j] + potential[i] - potential[u];
          if (nd < dist[u]) {
            dist[u] = nd;
            parent[u] = i;
            queue.emplace(nd, u);
          }
        }
      } else {
        const int j = v - m;
        auto& edges = back_edges[j];
        size_t out = 0;
        for (int i : edges) {
          auto it = flow[i].find(j);
          if (it == flow[i].end() || it->second <= 0.0) continue;  // stale
          edges[out++] = i;
          if (done[i]) continue;
          const double nd = d - cost[static_cast<size_t>(i) * n + j] + potential[v] -
                            potential[i];
          if (nd < dist[i]) {
            dist[i] = nd;
            parent[i] = v;
            queue.emplace(nd, i);
          }
        }
        edges.resize(out);
      }
    }

    if (found_target < 0) {
      throw std::runtime_error("discrete_wp: no augmenting path (unbalanced problem?)");
    }

    for (int v = 0; v < m + n; ++v) {
      potential[v] += std::min(dist[v], found_distance);
    }

    // trace the path and find the bottleneck
    std::vector<int> path;  // nodes target..source
    int v = m + found_target;
    path.push_back(v);
    while (parent[v] >= 0) {
      v = parent[v];
      path.push_back(v);
    }
    const int source = path.back();
    double amount = std::min(supply[source], demand[found_target]);
    for (size_t idx = 0; idx + 1 < path.size(); ++idx) {
      const int a = path[idx + 1];
      const int b = path[idx];
      if (a >= m) {
        // backward edge target a -> source b, limited by existing flow
        amount = std::min(amount, flow[b][a - m]);
      }
    }

    for (size_t idx = 0; idx + 1 < path.size(); ++idx) {
      const int a = path[idx + 1];
      const int b = path[idx];
      if (a < m) {
        double& f = flow[a][b - m];
        if (f == 0.0) back_edges[b - m].push_back(a);
        f += amount;
      } else {
        double& f = flow[b][a - m];
        f -= amount;
        if (f <= mass_floor) {
          flow[b].erase(a - m);
        }
      }
    }
    supply[source] -= amount;
    demand[found_target] -= amount;
    if (supply[source] <= mass_floor) supply[source] = 0.0;
    if (demand[found_target] <= mass_floor) demand[found_target] = 0.0;
  }

  TransportPlan plan;
  double total_cost = 0.0;
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, f] : flow[i]) {
      if (f <= 0.0) continue;
      plan.entries.push_back({i, j, f});
      total_cost += f * cost[static_cast<size_t>(i) * n + j];
    }
  }
  plan.cost = p == 1 ? total_cost : std::sqrt(total_cost);
  plan.source_potential.assign(potential.begin(), potential.begin() + m);
  plan.target_potential.assign(potential.begin() + m, potential.end());

  // dual certificate: reduced costs nonnegative, zero on the support
  const double tol = 1e-8 * (1.0 + max_cost);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double reduced = cost[static_cast<size_t>(i) * n + j] +
                             plan.source_potential[i] - plan.target_potential[j];
      if (reduced < -tol) {
        throw std::runtime_error("discrete_wp: dual certificate violated");
      }
    }
  }
  for (const auto& e : plan.entries) {
    const double reduced = cost[static_cast<size_t>(e.from) * n + e.to] +
                           plan.source_potential[e.from] - plan.target_potential[e.to];
    if (std::abs(reduced) > tol) {
      throw std::runtime_error("discrete_wp: complementary slackness violated");
    }
  }
  return plan;
}

namespace {

DiscreteTransportProblem merged_problem(const DiscreteMeasure& mu,
                                        const DiscreteMeasure& nu,
                                        const DiscreteMeasure* alpha) {
  DiscreteTransportProblem p;
  p.source_points = mu.points();
  p.source_masses = mu.masses();
  p.target_points = nu.points();
  p.target_masses = nu.masses();
  if (alpha) {
    p.source_points.insert(p.source_points.end(), alpha->points().begin(),
                           alpha->points().end());
    p.source_masses.insert(p.source_masses.end(), alpha->masses().begin(),
                           alpha->masses().end());
    p.target_points.insert(p.target_points.end(), alpha->points().begin(),
                           alpha->points().end());
    p.target_masses.insert(p.target_masses.end(), alpha->masses().begin(),
                           alpha->masses().end());
  }
  return p;
}

}  // namespace

InvarianceCheck check_additive_invariance(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          const DiscreteMeasure& alpha) {
  InvarianceCheck out;
  out.w1_base = discrete_w1(merged_problem(mu, nu, nullptr)).cost;
  out.w1_shifted = discrete_w1(merged_problem(mu, nu, &alpha)).cost;
  out.gap = std::abs(out.w1_shifted - out.w1_base);
  return out;
}

ScalingCheck check_scaling_law(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               double c, int p) {
  if (!(c > 0.0)) throw std::invalid_argument("check_scaling_law: c must be positive");
  ScalingCheck out;
  const double base = discrete_wp(merged_problem(mu, nu, nullptr), p).cost;
  const DiscreteMeasure mu_scaled = mu.scaled(c);
  const DiscreteMeasure nu_scaled = nu.scaled(c);
  out.lhs = discrete_wp(merged_problem(mu_scaled, nu_scaled, nullptr), p).cost;
  out.rhs = std::pow(c, 1.0 / p) * base;
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace sdot1
