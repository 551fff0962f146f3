#include <doctest.h>

#include <set>

#include "auvplan/mission.hpp"
#include "auvplan/oracle.hpp"
#include "support.hpp"

using namespace auvplan;
using auvplan::test::error_of;

namespace {

void check_report_invariants(const MissionReport& r, const Scenario& s) {
  double flown = 0.0;
  std::set<std::size_t> edges;
  std::size_t tasks = 0;
  double weight = 0.0;
  for (const SegmentRecord& seg : r.segments) {
    flown += seg.actual_time;
    CHECK(edges.insert(seg.edge).second);
    const Edge& e = s.graph.edge(seg.edge);
    if (e.task) {
      ++tasks;
      weight += e.weight;
    }
    CHECK(seg.exceeded == (seg.actual_time > seg.expected_time));
    if (seg.to != s.dest) CHECK(seg.rerouted_after == seg.exceeded);
  }
  CHECK(s.budget == r.remaining_time + flown + r.totals.compute_charged);
  CHECK(r.completed_tasks == tasks);
  CHECK(r.obtained_weight == doctest::Approx(weight));
  CHECK(r.success == (r.reached_destination && r.remaining_time >= 0.0));
  CHECK(r.remaining_time <= r.budget);
  if (r.success && !r.segments.empty()) CHECK(r.segments.back().to == s.dest);
  for (std::size_t k = 1; k < r.segments.size(); ++k) CHECK(r.segments[k].from == r.segments[k - 1].to);
}

}  // namespace

TEST_CASE("needs_rerouting") {
  CHECK(needs_rerouting(120, 100));
  CHECK_FALSE(needs_rerouting(90, 100));
  CHECK_FALSE(needs_rerouting(100, 100));
}

TEST_CASE("quantize_time") {
  CHECK(quantize_time(1.0) == 1.0);
  const double q = quantize_time(0.1);
  CHECK(q * 1048576.0 == std::round(q * 1048576.0));
  CHECK(std::abs(q - 0.1) <= 0x1.0p-21);
}

TEST_CASE("null mission") {
  const Scenario s = test::open_water_scenario(test::diamond(), 2, 2, 500.0);
  Rng rng(1);
  const MissionReport r = run_mission(s, test::steady_mission_config(), rng);
  CHECK(r.success);
  CHECK(r.remaining_time == 500.0);
  CHECK(r.segments.empty());
  CHECK(r.reroute_count == 0);
}

TEST_CASE("mission on a small open-water graph collects the oracle-optimal weight") {
  const Scenario s = test::open_water_scenario(test::diamond(300.0, true), 0, 3, 2000.0);
  MissionConfig cfg = test::steady_mission_config();
  Rng rng(7);
  const MissionReport r = run_mission(s, cfg, rng);
  CHECK(r.success);
  CHECK(r.reroute_count == 0);
  const auto costs = estimated_path_costs(s.graph, s.cruise_speed, cfg.time_allowance, cfg.firefly.modeled_cpu_seconds);
  const OracleResult oracle = brute_force_route_oracle(s.graph, 0, 3, s.budget, s.cruise_speed, cfg.route_weights, costs);
  REQUIRE(oracle.best);
  double task_weight = 0.0;
  for (std::size_t e : oracle.best->edges) {
    if (s.graph.edge(e).task) task_weight += s.graph.edge(e).weight;
  }
  CHECK(r.obtained_weight == doctest::Approx(task_weight));
  check_report_invariants(r, s);

  Rng again(7);
  const MissionReport replay = run_mission(s, cfg, again);
  CHECK(replay.remaining_time == r.remaining_time);
  CHECK(replay.segments.size() == r.segments.size());
}

TEST_CASE("injected delay forces one re-route onto the other branch") {
  // S-A-D and S-B-D, plus a direct A-B link so the mission can switch branches.
  std::vector<Waypoint> w{test::wp(0, 0, 0, 20), test::wp(1, 300, 300, 20), test::wp(2, 300, -300, 20),
                          test::wp(3, 600, 0, 20), test::wp(4, 300, 0, 20)};
  std::vector<EdgeSpec> e{{0, 1, std::nullopt}, {1, 3, std::nullopt}, {0, 2, std::nullopt},
                          {2, 3, std::nullopt}, {1, 4, std::nullopt}, {4, 2, std::nullopt}};
  const Scenario s = test::open_water_scenario(build_graph(w, e, 2.0), 0, 3, 2000.0);
  MissionConfig cfg = test::steady_mission_config();
  cfg.injected_delays[0] = 400.0;
  Rng rng(3);
  const MissionReport r = run_mission(s, cfg, rng);
  CHECK(r.success);
  CHECK(r.reroute_count == 1);
  REQUIRE(r.routes.size() == 2);
  REQUIRE_FALSE(r.segments.empty());
  CHECK(r.segments[0].injected_delay == 400.0);
  CHECK(r.segments[0].rerouted_after);
  for (std::size_t edge : r.routes[1].edges) CHECK(edge != r.segments[0].edge);
  CHECK(r.totals.compute_charged == cfg.route_weights.compute_time);
  check_report_invariants(r, s);
}

TEST_CASE("apply_rerouting") {
  const Scenario s = test::open_water_scenario(test::diamond(), 0, 3, 5000.0);
  const MissionConfig cfg = test::steady_mission_config();
  MissionState state;
  state.current_node = 0;
  state.remaining_time = 1000.0;
  state.working_graph = s.graph;
  state.working_graph.remove_edge(*s.graph.edge_between(0, 1));
  Rng rng(2);
  const MissionState next = apply_rerouting(state, s, cfg, rng);
  CHECK(next.active_route.nodes == std::vector<int>{0, 2, 3});
  CHECK(next.reroute_count == 1);
  CHECK(next.remaining_time == 1000.0 - cfg.route_weights.compute_time);
  CHECK(next.compute_charged == cfg.route_weights.compute_time);
  CHECK(next.route_position == 0);

  state.working_graph.remove_edge(*s.graph.edge_between(0, 2));
  CHECK(error_of([&] { apply_rerouting(state, s, cfg, rng); }) == ErrorCode::kNoRouteExists);
}

TEST_CASE("budget exhaustion fails the mission") {
  const Scenario s = test::open_water_scenario(test::diamond(), 0, 3, 100.0);
  Rng rng(5);
  const MissionReport r = run_mission(s, test::steady_mission_config(), rng);
  CHECK_FALSE(r.success);
  CHECK(r.remaining_time < 0.0);
  CHECK(r.failure == "time budget exhausted");
  check_report_invariants(r, s);
}

TEST_CASE("mission config validation") {
  MissionConfig cfg;
  cfg.injected_delays[0] = -1.0;
  CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::kInvalidArgument);
  Scenario s = test::open_water_scenario(test::diamond(), 0, 9, 100.0);
  Rng rng(1);
  CHECK(error_of([&] { run_mission(s, MissionConfig{}, rng); }) == ErrorCode::kScenarioInvalid);
}
