#include "auvplan/route_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "auvplan/error.hpp"

namespace auvplan {

void DifferentialEvolutionConfig::validate() const {
  if (population < 4) throw PlanningError(ErrorCode::kPopulationTooSmall, "DE population must be >= 4");
  if (!(scale_lo >= 0.0 && scale_lo <= scale_hi)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "DE scale range must satisfy 0 <= lo <= hi");
  }
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "crossover rate must lie in [0, 1]");
  }
}

void RouteCostWeights::validate() const {
  if (!(time_fit >= 0.0 && task_cost >= 0.0 && compute_time >= 0.0)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "route cost weights must be >= 0");
  }
  if (!(time_fit + task_cost > 0.0)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "time_fit + task_cost must be positive");
  }
}

std::optional<Route> decode_route(const PriorityVector& keys, const MissionGraph& graph, int start,
                                  int dest) {
  if (!graph.contains(start) || !graph.contains(dest)) {
    throw PlanningError(ErrorCode::kUnknownWaypoint, "route endpoints must be graph waypoints");
  }
  if (keys.size() != static_cast<Eigen::Index>(graph.size())) {
    throw PlanningError(ErrorCode::kInvalidArgument, "priority vector length must equal waypoint count");
  }
  Route route;
  route.nodes.push_back(start);
  std::vector<bool> visited(graph.size(), false);
  visited[static_cast<std::size_t>(start)] = true;
  int current = start;
  while (current != dest) {
    int next = -1;
    for (int candidate : graph.neighbors(current)) {
      if (visited[static_cast<std::size_t>(candidate)]) continue;
      if (next < 0 || keys[candidate] > keys[next]) next = candidate;
    }
    if (next < 0) {
      if (!graph.adjacent(current, dest)) return std::nullopt;
      next = dest;
    }
    route.edges.push_back(*graph.edge_between(current, next));
    route.nodes.push_back(next);
    visited[static_cast<std::size_t>(next)] = true;
    current = next;
  }
  return route;
}

double route_time(const Route& route, const MissionGraph& graph, double speed) {
  if (!(speed > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "speed must be positive");
  double total = 0.0;
  for (std::size_t e : route.edges) total += edge_time(graph, e, speed);
  return total;
}

RouteMetrics route_metrics(const Route& route, const MissionGraph& graph) {
  RouteMetrics m;
  for (std::size_t e : route.edges) {
    const Edge& edge = graph.edge(e);
    m.total_weight += edge.weight;
    if (edge.task) m.task_cost += edge.task->risk / edge.task->priority;
  }
  return m;
}

double edge_time(const MissionGraph& graph, std::size_t edge, double speed,
                 std::span<const double> path_costs) {
  const Edge& e = graph.edge(edge);
  const double length = edge < path_costs.size() ? path_costs[edge] : e.distance;
  return length / speed + e.task_duration();
}

std::vector<double> estimated_path_costs(const MissionGraph& graph, double speed, double allowance,
                                         double cpu_seconds) {
  std::vector<double> costs;
  costs.reserve(graph.edges().size());
  for (const Edge& e : graph.edges()) costs.push_back(e.distance * (1.0 + allowance) + speed * cpu_seconds);
  return costs;
}

RouteCost route_cost(const Route& route, const MissionGraph& graph, double budget, double speed,
                     const RouteCostWeights& weights, std::span<const double> path_costs,
                     std::size_t reroute_count) {
  if (!(speed > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "speed must be positive");
  RouteCost c;
  for (std::size_t e : route.edges) c.total_time += edge_time(graph, e, speed, path_costs);
  const RouteMetrics m = route_metrics(route, graph);
  c.value = weights.time_fit * std::abs(c.total_time - budget) + weights.task_cost * m.task_cost +
            static_cast<double>(reroute_count) * weights.compute_time;
  c.within_budget = c.total_time < budget;
  return c;
}

void annotate_route(Route& route, const MissionGraph& graph, double budget, double speed,
                    const RouteCostWeights& weights, std::span<const double> path_costs,
                    std::size_t reroute_count) {
  route.edge_times.clear();
  for (std::size_t e : route.edges) route.edge_times.push_back(edge_time(graph, e, speed, path_costs));
  const RouteMetrics m = route_metrics(route, graph);
  const RouteCost c = route_cost(route, graph, budget, speed, weights, path_costs, reroute_count);
  route.total_time = c.total_time;
  route.total_weight = m.total_weight;
  route.task_cost = m.task_cost;
  route.within_budget = c.within_budget;
  route.cost = c.value;
}

// ---------------------------------------------------------------------------

PriorityVector de_mutate_with(const PriorityVector& x1, const PriorityVector& x2,
                              const PriorityVector& x3, const Eigen::Vector3d& lambda, double scale) {
  const double sum = lambda.sum();
  const Eigen::Vector3d w = sum > 0.0 ? Eigen::Vector3d(lambda / sum) : Eigen::Vector3d::Constant(1.0 / 3.0);
  const PriorityVector donor = w[0] * x1 + w[1] * x2 + w[2] * x3;
  return (donor + scale * (x1 - x2)).cwiseMax(0.0).cwiseMin(1.0);
}

PriorityVector de_mutate(std::span<const PriorityVector> population, std::size_t i, double scale,
                         Rng& rng) {
  const std::size_t n = population.size();
  if (n < 4) throw PlanningError(ErrorCode::kPopulationTooSmall, "mutation needs at least four individuals");
  std::size_t r[3];
  for (std::size_t q = 0; q < 3; ++q) {
    std::size_t pick = 0;
    do {
      pick = rng.index(n);
    } while (pick == i || std::find(r, r + q, pick) != r + q);
    r[q] = pick;
  }
  const Eigen::Vector3d lambda(rng.uniform(), rng.uniform(), rng.uniform());
  return de_mutate_with(population[r[0]], population[r[1]], population[r[2]], lambda, scale);
}

PriorityVector de_crossover_with(const PriorityVector& parent, const PriorityVector& mutant,
                                 double rate, std::span<const double> draws, std::size_t forced) {
  if (parent.size() != mutant.size() || draws.size() != static_cast<std::size_t>(parent.size())) {
    throw PlanningError(ErrorCode::kInvalidArgument, "crossover operands differ in length");
  }
  PriorityVector trial = parent;
  for (Eigen::Index q = 0; q < trial.size(); ++q) {
    if (draws[static_cast<std::size_t>(q)] <= rate || static_cast<std::size_t>(q) == forced) trial[q] = mutant[q];
  }
  return trial;
}

PriorityVector de_crossover(const PriorityVector& parent, const PriorityVector& mutant, double rate,
                            Rng& rng) {
  std::vector<double> draws(static_cast<std::size_t>(parent.size()));
  for (double& d : draws) d = rng.uniform();
  const std::size_t forced = rng.index(draws.size());
  return de_crossover_with(parent, mutant, rate, draws, forced);
}

// ---------------------------------------------------------------------------

std::optional<Route> fastest_route(const MissionGraph& graph, int start, int dest, double speed,
                                   std::span<const double> path_costs) {
  if (!graph.contains(start) || !graph.contains(dest)) return std::nullopt;
  const std::size_t k = graph.size();
  std::vector<double> dist(k, std::numeric_limits<double>::infinity());
  std::vector<int> prev(k, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[static_cast<std::size_t>(start)] = 0.0;
  open.emplace(0.0, start);
  while (!open.empty()) {
    const auto [d, node] = open.top();
    open.pop();
    if (d > dist[static_cast<std::size_t>(node)]) continue;
    if (node == dest) break;
    for (int next : graph.neighbors(node)) {
      const double nd = d + edge_time(graph, *graph.edge_between(node, next), speed, path_costs);
      if (nd < dist[static_cast<std::size_t>(next)]) {
        dist[static_cast<std::size_t>(next)] = nd;
        prev[static_cast<std::size_t>(next)] = node;
        open.emplace(nd, next);
      }
    }
  }
  if (!std::isfinite(dist[static_cast<std::size_t>(dest)])) return std::nullopt;
  Route route;
  for (int node = dest; node != -1; node = prev[static_cast<std::size_t>(node)]) route.nodes.push_back(node);
  std::reverse(route.nodes.begin(), route.nodes.end());
  for (std::size_t q = 1; q < route.nodes.size(); ++q) {
    route.edges.push_back(*graph.edge_between(route.nodes[q - 1], route.nodes[q]));
  }
  return route;
}

RoutePlan plan_route(const MissionGraph& graph, int start, int dest, double budget, double speed,
                     const DifferentialEvolutionConfig& cfg, const RouteCostWeights& weights,
                     Rng& rng, const RoutePlanOptions& options) {
  cfg.validate();
  weights.validate();
  if (!(speed > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "speed must be positive");
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "time budget must be finite and >= 0");
  }
  if (!graph.contains(start) || !graph.contains(dest)) {
    throw PlanningError(ErrorCode::kUnknownWaypoint, "route endpoints must be graph waypoints");
  }
  if (!graph.connected(start, dest)) {
    throw PlanningError(ErrorCode::kNoRouteExists, "destination unreachable from waypoint " + std::to_string(start));
  }
  const std::span<const double> path_costs(options.path_costs);
  RoutePlan plan;
  if (start == dest) {
    plan.route.nodes = {start};
    annotate_route(plan.route, graph, budget, speed, weights, path_costs, options.reroute_count);
    return plan;
  }

  auto evaluate = [&](const PriorityVector& keys) -> std::pair<RouteRank, std::optional<Route>> {
    ++plan.evaluations;
    std::optional<Route> route = decode_route(keys, graph, start, dest);
    if (!route) return {kInfeasibleRank, std::nullopt};
    const RouteCost c = route_cost(*route, graph, budget, speed, weights, path_costs, options.reroute_count);
    return {c.rank(), std::move(route)};
  };

  const std::size_t n = cfg.population;
  const auto k = static_cast<Eigen::Index>(graph.size());
  std::vector<PriorityVector> population(n);
  std::vector<RouteRank> ranks(n);
  RouteRank best_rank = kInfeasibleRank;
  std::optional<Route> best_route;
  auto consider = [&](const RouteRank& rank, std::optional<Route>& route) {
    if (route && (!best_route || rank < best_rank)) {
      best_rank = rank;
      best_route = std::move(route);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    population[i].resize(k);
    for (Eigen::Index q = 0; q < k; ++q) population[i][q] = rng.uniform();
    auto [rank, route] = evaluate(population[i]);
    ranks[i] = rank;
    consider(rank, route);
  }

  std::vector<PriorityVector> next(n);
  std::vector<RouteRank> next_ranks(n);
  plan.best_history.reserve(cfg.generations);
  for (std::size_t g = 0; g < cfg.generations; ++g) {
    for (std::size_t i = 0; i < n; ++i) {
      const double scale = rng.uniform(cfg.scale_lo, cfg.scale_hi);
      PriorityVector mutant = de_mutate(population, i, scale, rng);
      PriorityVector trial = de_crossover(population[i], mutant, cfg.crossover, rng);
      auto [mutant_rank, mutant_route] = evaluate(mutant);
      auto [trial_rank, trial_route] = evaluate(trial);
      consider(mutant_rank, mutant_route);
      consider(trial_rank, trial_route);

      next[i] = population[i];
      next_ranks[i] = ranks[i];
      if (de_select(next_ranks[i], mutant_rank)) {
        next[i] = std::move(mutant);
        next_ranks[i] = mutant_rank;
      }
      if (de_select(next_ranks[i], trial_rank)) {
        next[i] = std::move(trial);
        next_ranks[i] = trial_rank;
      }
    }
    std::swap(population, next);
    std::swap(ranks, next_ranks);
    plan.best_history.push_back(best_rank);
  }

  if (!best_route) {
    best_route = fastest_route(graph, start, dest, speed, path_costs);
    plan.fallback = true;
  }
  plan.route = std::move(*best_route);
  annotate_route(plan.route, graph, budget, speed, weights, path_costs, options.reroute_count);
  return plan;
}

}  // namespace auvplan
