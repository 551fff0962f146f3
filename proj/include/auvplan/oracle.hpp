#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auvplan/environment.hpp"
#include "auvplan/route_planner.hpp"

namespace auvplan {

/// Test-support reference implementations that share no code with the
/// optimizers.

inline constexpr std::size_t kDefaultOracleNodeCap = 8;

/// Every simple start-dest walk (no repeated node, hence no repeated edge),
/// in depth-first order with neighbours by increasing id. Throws
/// GraphTooLarge above `max_nodes` waypoints.
std::vector<Route> enumerate_routes(const MissionGraph& graph, int start, int dest,
                                    std::size_t max_nodes = kDefaultOracleNodeCap);

struct OracleResult {
  std::optional<Route> best;   // annotated; nullopt when nothing fits the budget
  std::size_t enumerated = 0;  // walks examined
};

/// Minimum route_cost over all simple walks whose time is below the budget.
/// Walks are pruned once their partial time reaches the budget.
OracleResult brute_force_route_oracle(const MissionGraph& graph, int start, int dest, double budget,
                                      double speed, const RouteCostWeights& weights,
                                      std::span<const double> path_costs = {},
                                      std::size_t max_nodes = kDefaultOracleNodeCap);

/// Checks the four routing rules: starts at start and ends at dest, uses only
/// existing edges, visits no node twice, traverses no edge twice. Also checks
/// that `edges` agrees with `nodes`. On failure returns the broken rule.
std::optional<std::string> route_violation(const Route& route, const MissionGraph& graph, int start,
                                           int dest);

}  // namespace auvplan
