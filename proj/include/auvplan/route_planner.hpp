#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "auvplan/environment.hpp"
#include "auvplan/rng.hpp"

namespace auvplan {

/// Random-keys genotype: one key in [0,1] per waypoint.
using PriorityVector = Eigen::VectorXd;

struct Route {
  std::vector<int> nodes;           // start ... destination
  std::vector<std::size_t> edges;   // indices into the graph's edge list
  std::vector<double> edge_times;   // planned time per edge (the T_exp of each leg)
  double total_time = 0.0;
  double total_weight = 0.0;
  double task_cost = 0.0;           // sum of risk/priority over task edges
  bool within_budget = false;
  double cost = 0.0;

  bool empty() const { return edges.empty(); }
};

struct DifferentialEvolutionConfig {
  std::size_t population = 100;
  std::size_t generations = 100;
  double scale_lo = 0.2;   // F_s range
  double scale_hi = 0.8;
  double crossover = 0.2;  // r_c

  void validate() const;
};

struct RouteCostWeights {
  double time_fit = 1.0;      // Phi_1
  double task_cost = 1.0;     // Phi_2
  double compute_time = 1.0;  // seconds charged per re-route

  void validate() const;
};

/// Greedy walk from `start`: always step to the unvisited neighbour with the
/// largest key (ties to the lower id) until `dest` is reached. A walk that
/// gets stuck is repaired by jumping to `dest` when that edge exists, and is
/// otherwise infeasible (nullopt). Only the node/edge fields are filled.
std::optional<Route> decode_route(const PriorityVector& keys, const MissionGraph& graph, int start,
                                  int dest);

/// Sum over the route's edges of d / speed + task duration.
double route_time(const Route& route, const MissionGraph& graph, double speed);

struct RouteMetrics {
  double total_weight = 0.0;
  double task_cost = 0.0;
};

RouteMetrics route_metrics(const Route& route, const MissionGraph& graph);

/// Lower is better. Tier 0: within budget; tier 1: over budget; tier 2: no
/// decodable route. Ties within a tier go to the lower value.
struct RouteRank {
  int tier = 2;
  double value = 0.0;

  auto operator<=>(const RouteRank&) const = default;
};

inline constexpr RouteRank kInfeasibleRank{2, 0.0};

/// Per-edge time used by route_cost: path_cost / speed + task duration when a
/// path cost is supplied for that edge (indexed by edge index), otherwise the
/// nominal d / speed + task duration.
double edge_time(const MissionGraph& graph, std::size_t edge, double speed,
                 std::span<const double> path_costs = {});

/// Expected path cost of every edge: distance * (1 + allowance) plus the
/// modeled planner time expressed as distance (speed * cpu_seconds).
std::vector<double> estimated_path_costs(const MissionGraph& graph, double speed, double allowance,
                                         double cpu_seconds);

struct RouteCost {
  double value = 0.0;
  double total_time = 0.0;
  bool within_budget = false;

  RouteRank rank() const { return {within_budget ? 0 : 1, value}; }
};

/// C = Phi_1 |T - budget| + Phi_2 * task_cost + reroutes * compute_time,
/// within budget iff T < budget.
RouteCost route_cost(const Route& route, const MissionGraph& graph, double budget, double speed,
                     const RouteCostWeights& weights, std::span<const double> path_costs = {},
                     std::size_t reroute_count = 0);

/// Fills the timing and cost fields of a decoded route.
void annotate_route(Route& route, const MissionGraph& graph, double budget, double speed,
                    const RouteCostWeights& weights, std::span<const double> path_costs = {},
                    std::size_t reroute_count = 0);

/// Mutation with explicit mixing weights: donor = sum(lambda_q x_q) / sum(lambda),
/// mutant = donor + scale (x1 - x2), clamped to [0,1].
PriorityVector de_mutate_with(const PriorityVector& x1, const PriorityVector& x2,
                              const PriorityVector& x3, const Eigen::Vector3d& lambda, double scale);

/// Picks distinct r1, r2, r3 != i and mixing weights U(0,1). Throws
/// PopulationTooSmall below four individuals.
PriorityVector de_mutate(std::span<const PriorityVector> population, std::size_t i, double scale,
                         Rng& rng);

/// Binomial crossover with explicit draws: key q comes from the mutant when
/// draws[q] <= rate or q == forced, otherwise from the parent.
PriorityVector de_crossover_with(const PriorityVector& parent, const PriorityVector& mutant,
                                 double rate, std::span<const double> draws, std::size_t forced);

PriorityVector de_crossover(const PriorityVector& parent, const PriorityVector& mutant, double rate,
                            Rng& rng);

/// Greedy selection: the challenger survives iff its rank is <= the incumbent's.
inline bool de_select(const RouteRank& incumbent, const RouteRank& challenger) {
  return challenger <= incumbent;
}

struct RoutePlanOptions {
  std::vector<double> path_costs;  // optional per-edge path cost, see edge_time
  std::size_t reroute_count = 0;
};

struct RoutePlan {
  Route route;
  std::vector<RouteRank> best_history;  // best rank after each generation
  std::size_t evaluations = 0;
  bool fallback = false;  // no key vector decoded; route is the fastest path
};

/// Differential-evolution search over random-keys vectors. Returns the best
/// decoded route; route.within_budget is false when no evaluated route fits.
/// Throws NoRouteExists when dest is unreachable from start.
RoutePlan plan_route(const MissionGraph& graph, int start, int dest, double budget, double speed,
                     const DifferentialEvolutionConfig& cfg, const RouteCostWeights& weights,
                     Rng& rng, const RoutePlanOptions& options = {});

/// Fastest start-dest route by edge_time (Dijkstra), or nullopt if unreachable.
std::optional<Route> fastest_route(const MissionGraph& graph, int start, int dest, double speed,
                                   std::span<const double> path_costs = {});

}  // namespace auvplan
