#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "auvplan/environment.hpp"
#include "auvplan/rng.hpp"

namespace auvplan {

/// Everything a mission needs: world, waypoint network, endpoints and budget.
struct Scenario {
  std::optional<TerrainMap> terrain;
  MissionGraph graph;
  std::vector<Obstacle> obstacles;
  CurrentField current;
  int start = 0;
  int dest = 0;
  double budget = 0.0;  // seconds
  double cruise_speed = 2.0;
  std::uint64_t seed = 0;

  /// Tasks carried by the graph's edges, in edge order.
  std::vector<Task> tasks() const;
  Environment environment() const;

  /// Throws ScenarioInvalid naming the first broken invariant.
  void validate() const;
};

struct ScenarioParams {
  std::size_t nodes_min = 30;
  std::size_t nodes_max = 50;
  std::size_t tasks = 15;
  std::size_t vortices = 12;

  std::size_t grid_cols = 100;
  std::size_t grid_rows = 100;
  double cell_size = 35.0;
  double z_min = 0.0;
  double z_max = 100.0;

  std::size_t coastal_blobs = 6;
  double blob_radius_min = 0.04;  // fractions of the smaller map extent
  double blob_radius_max = 0.09;
  double position_sigma = 0.05;   // lattice jitter, fraction of extent
  double max_edge_length = 0.4;   // fraction of the smaller extent
  std::size_t nearest_links = 2;  // extra links per node beyond the spanning tree
  double max_edge_pitch_deg = 12.0;

  std::size_t obstacles = 5;
  double obstacle_radius_min = 10.0;
  double obstacle_radius_max = 25.0;
  double obstacle_center_sigma = 15.0;
  double obstacle_growth = 0.0;

  double vortex_radius_min = 100.0;
  double vortex_radius_max = 400.0;
  double vortex_strength = 2.0;  // |circulation| = vortex_strength * radius

  double cruise_speed = 2.0;
  double budget = 7200.0;
  /// When set, the budget is this multiple of the fastest start-dest time and
  /// dest is the waypoint farthest (in time) from start.
  std::optional<double> budget_factor;
  /// With a fixed budget, dest is the farthest waypoint whose fastest time is
  /// within this fraction of the budget.
  double dest_budget_fraction = 0.5;

  void validate() const;
};

/// Smaller networks for quick runs: 10-15 waypoints, 5 tasks, budget twice
/// the fastest start-dest time.
ScenarioParams desk_params();

/// Throws ParamsOutOfRange when params are inconsistent or no connected
/// network could be built.
Scenario generate_scenario(const ScenarioParams& params, Rng& rng);

}  // namespace auvplan
