#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "auvplan/environment.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/rng.hpp"
#include "auvplan/route_planner.hpp"
#include "auvplan/scenario.hpp"
#include "auvplan/vehicle.hpp"

namespace auvplan {

struct MissionConfig {
  FireflyConfig firefly;
  DifferentialEvolutionConfig evolution;
  CostWeights path_weights = [] {
    CostWeights w;
    w.heading_frame = HeadingFrame::kSegment;
    return w;
  }();
  RouteCostWeights route_weights;
  VehicleBounds bounds;  // cruise_speed is taken from the scenario
  /// Detour allowance folded into each leg's expected time.
  double time_allowance = 0.05;
  /// Extra seconds added to the flown time of the given segment (0-based
  /// count of flown segments). Used to force re-routes deterministically.
  std::map<std::size_t, double> injected_delays;
  /// Charge measured wall-clock for each re-route instead of
  /// route_weights.compute_time. Breaks bit-reproducibility.
  bool measure_compute = false;

  void validate() const;
};

/// Desk-scale planner settings (smaller swarm, fewer iterations).
MissionConfig desk_mission_config();

/// Clock values are kept on a 2^-20 s grid so the budget bookkeeping is exact.
double quantize_time(double seconds);

inline bool needs_rerouting(double actual, double expected) { return actual > expected; }

struct SegmentRecord {
  std::size_t edge = 0;
  int from = 0;
  int to = 0;
  double expected_time = 0.0;  // T_exp of this leg in the active route
  double actual_time = 0.0;    // flown time, including any injected delay
  double injected_delay = 0.0;
  double clock_start = 0.0;    // mission time when the leg began
  bool exceeded = false;       // actual_time > expected_time
  bool rerouted_after = false; // a new route was planned after this leg
  std::size_t route_index = 0; // which entry of MissionReport::routes was active
  PlannedPath path;
};

struct MissionTotals {
  double route_cost = 0.0;        // cost of the initial route
  double final_route_cost = 0.0;  // cost of the last planned route
  double path_cost = 0.0;
  double path_length = 0.0;
  double violation = 0.0;         // sum of normalized per-segment violations
  ViolationBreakdown violations;
  double path_cpu = 0.0;
  double compute_charged = 0.0;
  double flight_time = 0.0;       // sum of actual_time
};

struct MissionReport {
  bool success = false;
  bool reached_destination = false;
  std::string failure;  // empty on success
  int start = 0;
  int dest = 0;
  double budget = 0.0;
  double remaining_time = 0.0;
  std::size_t completed_tasks = 0;
  double obtained_weight = 0.0;
  std::size_t reroute_count = 0;
  std::vector<Route> routes;  // initial route, then one per re-route
  std::vector<SegmentRecord> segments;
  MissionTotals totals;
};

struct MissionState {
  int current_node = 0;
  double remaining_time = 0.0;
  MissionGraph working_graph;
  Route active_route;
  std::size_t route_position = 0;  // next edge of active_route to fly
  std::size_t reroute_count = 0;
  double compute_charged = 0.0;
  std::vector<SegmentRecord> log;
};

/// Charges the re-route computation time, re-plans from the current node on
/// the reduced graph with the remaining budget and increments the re-route
/// count. Visited edges must already be removed from the working graph.
/// Throws NoRouteExists when the destination is no longer reachable.
MissionState apply_rerouting(MissionState state, const Scenario& scenario,
                             const MissionConfig& config, Rng& rng);

/// Plans a route, flies it leg by leg and re-routes whenever a leg takes
/// longer than expected, until the destination is reached or the budget runs
/// out. Throws ScenarioInvalid for malformed scenarios.
MissionReport run_mission(const Scenario& scenario, const MissionConfig& config, Rng& rng);

}  // namespace auvplan
