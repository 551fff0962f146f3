#pragma once

#include <optional>
#include <vector>

#include "auvplan/environment.hpp"
#include "auvplan/error.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/monte_carlo.hpp"

namespace auvplan::test {

/// Code of the PlanningError thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const PlanningError& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Waypoint wp(int id, double x, double y, double z = 0.0) { return {id, {x, y, z}}; }

inline Task task(int id, double priority, double risk, double duration) {
  Task t;
  t.id = id;
  t.priority = priority;
  t.risk = risk;
  t.duration = duration;
  return t;
}

/// S=0, A=1, B=2, D=3 with edges S-A, A-D, S-B, B-D (indices 0..3). The A
/// branch is the same length as the B branch; `task_on_a` puts a task on S-A.
inline MissionGraph diamond(double side = 300.0, bool task_on_a = false) {
  std::vector<Waypoint> w{wp(0, 0, 0, 20), wp(1, side, side, 20), wp(2, side, -side, 20), wp(3, 2 * side, 0, 20)};
  std::vector<EdgeSpec> e{{0, 1, std::nullopt}, {1, 3, std::nullopt}, {0, 2, std::nullopt}, {2, 3, std::nullopt}};
  if (task_on_a) e[0].task = task(1, 10, 2, 20);
  return build_graph(w, e, 2.0);
}

inline Scenario open_water_scenario(MissionGraph graph, int start, int dest, double budget) {
  Scenario s;
  s.graph = std::move(graph);
  s.start = start;
  s.dest = dest;
  s.budget = budget;
  s.cruise_speed = 2.0;
  return s;
}

/// Tiny optimizer settings for tests that only exercise bookkeeping.
inline MissionConfig quick_mission_config() {
  MissionConfig cfg;
  cfg.firefly.population = 12;
  cfg.firefly.max_iterations = 12;
  cfg.evolution.population = 12;
  cfg.evolution.generations = 10;
  cfg.time_allowance = 0.5;
  return cfg;
}

/// Desk-size swarm, small route search: paths come out close to their chords.
inline MissionConfig steady_mission_config() {
  MissionConfig cfg = quick_mission_config();
  cfg.firefly.population = 40;
  cfg.firefly.max_iterations = 60;
  return cfg;
}

inline MonteCarloParams quick_monte_carlo_params() {
  MonteCarloParams p = desk_monte_carlo_params();
  p.mission = quick_mission_config();
  p.mission.time_allowance = 0.05;
  return p;
}

}  // namespace auvplan::test

namespace auvplan::test {

/// Random connected graph: a random spanning tree plus `extra` chords, with
/// tasks on up to `tasks` distinct edges. Positions are in a 2 km square.
inline MissionGraph random_graph(std::size_t nodes, std::size_t extra, std::size_t tasks, Rng& rng) {
  std::vector<Waypoint> w;
  for (std::size_t i = 0; i < nodes; ++i) {
    w.push_back(wp(static_cast<int>(i), rng.uniform(0, 2000), rng.uniform(0, 2000), rng.uniform(5, 95)));
  }
  std::vector<EdgeSpec> e;
  auto has = [&](int a, int b) {
    for (const EdgeSpec& s : e) {
      if ((s.a == a && s.b == b) || (s.a == b && s.b == a)) return true;
    }
    return false;
  };
  for (std::size_t i = 1; i < nodes; ++i) e.push_back({static_cast<int>(rng.index(i)), static_cast<int>(i), std::nullopt});
  const std::size_t max_edges = nodes * (nodes - 1) / 2;
  for (std::size_t k = 0; k < extra && e.size() < max_edges; ++k) {
    const int a = static_cast<int>(rng.index(nodes));
    const int b = static_cast<int>(rng.index(nodes));
    if (a != b && !has(a, b)) e.push_back({a, b, std::nullopt});
  }
  const auto drawn = sample_tasks(std::min(tasks, e.size()), rng);
  for (std::size_t t = 0; t < drawn.size(); ++t) {
    std::size_t k = rng.index(e.size());
    while (e[k].task) k = (k + 1) % e.size();
    e[k].task = drawn[t];
  }
  return build_graph(std::move(w), e, 2.0);
}

}  // namespace auvplan::test
