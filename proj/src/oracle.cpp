#include "auvplan/oracle.hpp"

#include <cmath>
#include <functional>
#include <set>

#include "auvplan/error.hpp"

namespace auvplan {

namespace {

void check_size(const MissionGraph& graph, std::size_t max_nodes, int start, int dest) {
  if (graph.size() > max_nodes) {
    throw PlanningError(ErrorCode::kGraphTooLarge, "oracle limited to " + std::to_string(max_nodes) +
                                                       " waypoints, graph has " + std::to_string(graph.size()));
  }
  if (!graph.contains(start) || !graph.contains(dest)) {
    throw PlanningError(ErrorCode::kUnknownWaypoint, "route endpoints must be graph waypoints");
  }
}

// Depth-first walk over simple paths. `visit` sees each complete walk and
// `keep_going` may prune a partial one.
void walk(const MissionGraph& graph, int dest, std::vector<int>& nodes, std::vector<bool>& on_path,
          const std::function<bool(const std::vector<int>&)>& keep_going,
          const std::function<void(const std::vector<int>&)>& visit) {
  const int here = nodes.back();
  if (here == dest) {
    visit(nodes);
    return;
  }
  const int k = static_cast<int>(graph.size());
  for (int next = 0; next < k; ++next) {
    if (on_path[static_cast<std::size_t>(next)] || !graph.adjacent(here, next)) continue;
    nodes.push_back(next);
    on_path[static_cast<std::size_t>(next)] = true;
    if (keep_going(nodes)) walk(graph, dest, nodes, on_path, keep_going, visit);
    on_path[static_cast<std::size_t>(next)] = false;
    nodes.pop_back();
  }
}

Route to_route(const std::vector<int>& nodes, const MissionGraph& graph) {
  Route r;
  r.nodes = nodes;
  for (std::size_t q = 1; q < nodes.size(); ++q) r.edges.push_back(*graph.edge_between(nodes[q - 1], nodes[q]));
  return r;
}

}  // namespace

std::vector<Route> enumerate_routes(const MissionGraph& graph, int start, int dest, std::size_t max_nodes) {
  check_size(graph, max_nodes, start, dest);
  std::vector<Route> out;
  std::vector<int> nodes{start};
  std::vector<bool> on_path(graph.size(), false);
  on_path[static_cast<std::size_t>(start)] = true;
  walk(graph, dest, nodes, on_path, [](const std::vector<int>&) { return true; },
       [&](const std::vector<int>& path) { out.push_back(to_route(path, graph)); });
  return out;
}

OracleResult brute_force_route_oracle(const MissionGraph& graph, int start, int dest, double budget,
                                      double speed, const RouteCostWeights& weights,
                                      std::span<const double> path_costs, std::size_t max_nodes) {
  check_size(graph, max_nodes, start, dest);
  if (!(speed > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "speed must be positive");
  OracleResult result;
  // Independent time bookkeeping: leg times are recomputed from the raw edge
  // attributes rather than through the route planner's helpers.
  auto leg = [&](int a, int b) {
    const std::size_t e = *graph.edge_between(a, b);
    const Edge& edge = graph.edge(e);
    const double length = e < path_costs.size() ? path_costs[e] : edge.distance;
    return length / speed + (edge.task ? edge.task->duration : 0.0);
  };
  auto time_of = [&](const std::vector<int>& nodes) {
    double t = 0.0;
    for (std::size_t q = 1; q < nodes.size(); ++q) t += leg(nodes[q - 1], nodes[q]);
    return t;
  };
  double best_value = 0.0;
  std::vector<int> nodes{start};
  std::vector<bool> on_path(graph.size(), false);
  on_path[static_cast<std::size_t>(start)] = true;
  walk(
      graph, dest, nodes, on_path, [&](const std::vector<int>& partial) { return time_of(partial) < budget; },
      [&](const std::vector<int>& path) {
        ++result.enumerated;
        const double t = time_of(path);
        if (!(t < budget)) return;
        double risk = 0.0;
        for (std::size_t q = 1; q < path.size(); ++q) {
          const Edge& edge = graph.edge(*graph.edge_between(path[q - 1], path[q]));
          if (edge.task) risk += edge.task->risk / edge.task->priority;
        }
        const double value = weights.time_fit * std::abs(t - budget) + weights.task_cost * risk;
        if (!result.best || value < best_value) {
          best_value = value;
          result.best = to_route(path, graph);
        }
      });
  if (result.best) annotate_route(*result.best, graph, budget, speed, weights, path_costs);
  return result;
}

std::optional<std::string> route_violation(const Route& route, const MissionGraph& graph, int start, int dest) {
  if (route.nodes.empty() || route.nodes.front() != start || route.nodes.back() != dest) {
    return "route must begin at the start and end at the destination";
  }
  if (route.edges.size() + 1 != route.nodes.size()) return "edge list does not match node list";
  std::set<int> seen_nodes;
  std::set<std::size_t> seen_edges;
  for (std::size_t q = 0; q < route.nodes.size(); ++q) {
    const int node = route.nodes[q];
    if (!graph.contains(node)) return "route references unknown waypoint " + std::to_string(node);
    if (!seen_nodes.insert(node).second) return "waypoint " + std::to_string(node) + " visited twice";
    if (q == 0) continue;
    const int prev = route.nodes[q - 1];
    const std::size_t e = route.edges[q - 1];
    if (e >= graph.edges().size() || !graph.is_active(e)) return "route uses a non-existent edge";
    const Edge& edge = graph.edge(e);
    if (!((edge.a == prev && edge.b == node) || (edge.a == node && edge.b == prev))) {
      return "edge " + std::to_string(e) + " does not join " + std::to_string(prev) + " and " + std::to_string(node);
    }
    if (!seen_edges.insert(e).second) return "edge " + std::to_string(e) + " traversed twice";
  }
  return std::nullopt;
}

}  // namespace auvplan
