#include "auvplan/mission.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "auvplan/error.hpp"

namespace auvplan {

void MissionConfig::validate() const {
  firefly.validate();
  evolution.validate();
  path_weights.validate();
  route_weights.validate();
  if (!(time_allowance >= 0.0) || !std::isfinite(time_allowance)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "time allowance must be finite and >= 0");
  }
  for (const auto& [segment, delay] : injected_delays) {
    if (!(delay >= 0.0) || !std::isfinite(delay)) {
      throw PlanningError(ErrorCode::kInvalidArgument,
                          "injected delay for segment " + std::to_string(segment) + " must be >= 0");
    }
  }
}

MissionConfig desk_mission_config() {
  MissionConfig cfg;
  cfg.firefly.population = 40;
  cfg.firefly.max_iterations = 60;
  cfg.evolution.population = 60;
  cfg.evolution.generations = 60;
  return cfg;
}

double quantize_time(double seconds) {
  constexpr double kTick = 0x1.0p-20;
  return std::round(seconds / kTick) * kTick;
}

namespace {

RoutePlanOptions route_options(const MissionGraph& graph, double speed, const MissionConfig& config,
                               std::size_t reroute_count) {
  RoutePlanOptions options;
  options.path_costs =
      estimated_path_costs(graph, speed, config.time_allowance, config.firefly.modeled_cpu_seconds);
  options.reroute_count = reroute_count;
  return options;
}

}  // namespace

MissionState apply_rerouting(MissionState state, const Scenario& scenario,
                             const MissionConfig& config, Rng& rng) {
  ++state.reroute_count;
  const auto began = std::chrono::steady_clock::now();
  double charge = quantize_time(config.route_weights.compute_time);
  if (!config.measure_compute) state.remaining_time -= charge;
  const RoutePlan plan =
      plan_route(state.working_graph, state.current_node, scenario.dest, std::max(0.0, state.remaining_time),
                 scenario.cruise_speed, config.evolution, config.route_weights, rng,
                 route_options(state.working_graph, scenario.cruise_speed, config, state.reroute_count));
  if (config.measure_compute) {
    charge = quantize_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count());
    state.remaining_time -= charge;
  }
  state.compute_charged += charge;
  state.active_route = plan.route;
  state.route_position = 0;
  return state;
}

MissionReport run_mission(const Scenario& scenario, const MissionConfig& config, Rng& rng) {
  scenario.validate();
  config.validate();

  VehicleBounds bounds = config.bounds;
  bounds.cruise_speed = scenario.cruise_speed;
  const Environment env = scenario.environment();

  MissionReport report;
  report.start = scenario.start;
  report.dest = scenario.dest;
  report.budget = scenario.budget;

  MissionState state;
  state.current_node = scenario.start;
  state.remaining_time = scenario.budget;
  state.working_graph = scenario.graph;

  const RoutePlan initial =
      plan_route(state.working_graph, scenario.start, scenario.dest, scenario.budget, scenario.cruise_speed,
                 config.evolution, config.route_weights, rng,
                 route_options(state.working_graph, scenario.cruise_speed, config, 0));
  state.active_route = initial.route;
  report.routes.push_back(initial.route);

  while (state.current_node != scenario.dest) {
    if (state.route_position >= state.active_route.edges.size()) {
      report.failure = "route ended before the destination";
      break;
    }
    const std::size_t edge_index = state.active_route.edges[state.route_position];
    const Edge& edge = state.working_graph.edge(edge_index);
    const int next = edge.other(state.current_node);

    SegmentRecord seg;
    seg.edge = edge_index;
    seg.from = state.current_node;
    seg.to = next;
    seg.expected_time = state.active_route.edge_times[state.route_position];
    seg.clock_start = scenario.budget - state.remaining_time;
    seg.route_index = report.routes.size() - 1;
    seg.path = plan_path(state.working_graph.waypoint(seg.from), state.working_graph.waypoint(seg.to), env,
                         bounds, config.path_weights, config.firefly, seg.clock_start, rng);
    const auto delay = config.injected_delays.find(state.log.size());
    seg.injected_delay = delay == config.injected_delays.end() ? 0.0 : delay->second;
    seg.actual_time = quantize_time(
        path_travel_time(seg.path.length, scenario.cruise_speed, edge.task_duration(), seg.path.cpu_time) +
        seg.injected_delay);
    seg.exceeded = needs_rerouting(seg.actual_time, seg.expected_time);

    state.remaining_time -= seg.actual_time;
    state.working_graph.remove_edge(edge_index);
    state.current_node = next;
    ++state.route_position;
    state.log.push_back(std::move(seg));

    if (state.current_node == scenario.dest) break;
    if (state.remaining_time < 0.0) {
      report.failure = "time budget exhausted";
      break;
    }
    if (state.log.back().exceeded) {
      state.log.back().rerouted_after = true;
      try {
        state = apply_rerouting(std::move(state), scenario, config, rng);
      } catch (const PlanningError& e) {
        if (e.code() != ErrorCode::kNoRouteExists) throw;
        report.failure = "destination unreachable after re-route";
        break;
      }
      report.routes.push_back(state.active_route);
      if (state.remaining_time < 0.0) {
        report.failure = "time budget exhausted";
        break;
      }
    }
  }

  report.reached_destination = state.current_node == scenario.dest;
  report.remaining_time = state.remaining_time;
  report.success = report.reached_destination && state.remaining_time >= 0.0;
  if (report.reached_destination && !report.success) report.failure = "time budget exhausted";
  report.reroute_count = state.reroute_count;

  MissionTotals& t = report.totals;
  t.route_cost = report.routes.front().cost;
  t.final_route_cost = report.routes.back().cost;
  t.compute_charged = state.compute_charged;
  for (const SegmentRecord& seg : state.log) {
    const Edge& edge = scenario.graph.edge(seg.edge);
    if (edge.task) {
      ++report.completed_tasks;
      report.obtained_weight += edge.weight;
    }
    t.path_cost += seg.path.cost;
    t.path_length += seg.path.length;
    t.violation += seg.path.violations.normalized(config.path_weights, seg.path.path.sample_count());
    t.violations += seg.path.violations;
    t.path_cpu += seg.path.cpu_time;
    t.flight_time += seg.actual_time;
  }
  report.segments = std::move(state.log);
  return report;
}

}  // namespace auvplan
