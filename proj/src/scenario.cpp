#include "auvplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "auvplan/error.hpp"
#include "auvplan/route_planner.hpp"
#include "auvplan/vehicle.hpp"

namespace auvplan {

std::vector<Task> Scenario::tasks() const {
  std::vector<Task> out;
  for (const Edge& e : graph.edges()) {
    if (e.task) out.push_back(*e.task);
  }
  return out;
}

Environment Scenario::environment() const {
  Environment env;
  env.terrain = terrain;
  env.obstacles = obstacles;
  env.current = current;
  return env;
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw PlanningError(ErrorCode::kScenarioInvalid, what); };
  if (graph.size() == 0) fail("scenario has no waypoints");
  if (!graph.contains(start) || !graph.contains(dest)) fail("start/dest must be graph waypoints");
  if (!(budget > 0.0) || !std::isfinite(budget)) fail("time budget must be positive");
  if (!(cruise_speed > 0.0) || !std::isfinite(cruise_speed)) fail("cruise speed must be positive");
  if (!graph.is_connected()) fail("waypoint graph is not connected");
  if (terrain) {
    for (const Waypoint& w : graph.waypoints()) {
      if (!is_navigable(*terrain, w.position.x(), w.position.y())) {
        fail("waypoint " + std::to_string(w.id) + " is not in navigable water");
      }
      if (w.position.z() < terrain->z_min() || w.position.z() > terrain->z_max()) {
        fail("waypoint " + std::to_string(w.id) + " lies outside the depth range");
      }
    }
  }
  for (const Obstacle& o : obstacles) {
    if (!graph.contains(o.anchor_a) || !graph.contains(o.anchor_b)) fail("obstacle anchor is not a waypoint");
    if (!(o.base_radius > 0.0)) fail("obstacle radius must be positive");
    if (!(o.growth_rate >= 0.0)) fail("obstacle growth must be >= 0");
  }
  for (const Vortex& v : current.vortices) {
    if (!(v.radius > 0.0)) fail("vortex radius must be positive");
  }
}

void ScenarioParams::validate() const {
  auto fail = [](const std::string& what) { throw PlanningError(ErrorCode::kParamsOutOfRange, what); };
  if (nodes_min < 2 || nodes_min > nodes_max) fail("need 2 <= nodes_min <= nodes_max");
  if (grid_cols == 0 || grid_rows == 0 || !(cell_size > 0.0)) fail("grid must be non-empty");
  if (!(z_min < z_max)) fail("depth range is empty");
  if (!(blob_radius_min > 0.0 && blob_radius_min <= blob_radius_max && blob_radius_max < 0.5)) {
    fail("blob radii must satisfy 0 < min <= max < 0.5");
  }
  if (!(position_sigma >= 0.0)) fail("position_sigma must be >= 0");
  if (!(max_edge_length > 0.0)) fail("max_edge_length must be positive");
  if (!(max_edge_pitch_deg > 0.0 && max_edge_pitch_deg < 90.0)) fail("max_edge_pitch_deg must lie in (0, 90)");
  if (!(obstacle_radius_min > 0.0 && obstacle_radius_min <= obstacle_radius_max)) {
    fail("obstacle radii must satisfy 0 < min <= max");
  }
  if (!(obstacle_center_sigma >= 0.0 && obstacle_growth >= 0.0)) fail("obstacle sigma and growth must be >= 0");
  if (!(vortex_radius_min > 0.0 && vortex_radius_min <= vortex_radius_max)) {
    fail("vortex radii must satisfy 0 < min <= max");
  }
  if (!(vortex_strength >= 0.0)) fail("vortex_strength must be >= 0");
  if (!(cruise_speed > 0.0)) fail("cruise speed must be positive");
  if (budget_factor) {
    if (!(*budget_factor >= 1.0)) fail("budget_factor must be >= 1");
  } else if (!(budget > 0.0)) {
    fail("budget must be positive");
  }
  if (!(dest_budget_fraction > 0.0 && dest_budget_fraction <= 1.0)) fail("dest_budget_fraction must lie in (0, 1]");
}

ScenarioParams desk_params() {
  ScenarioParams p;
  p.nodes_min = 10;
  p.nodes_max = 15;
  p.tasks = 5;
  p.obstacles = 3;
  p.budget_factor = 2.0;
  return p;
}

namespace {

constexpr int kMaxAttempts = 50;

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.index(i)]);
}

struct DisjointSets {
  std::vector<std::size_t> parent;

  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

TerrainMap make_terrain(const ScenarioParams& p, Rng& rng) {
  std::vector<double> values(p.grid_cols * p.grid_rows, 1.0);
  TerrainMap map(p.grid_cols, p.grid_rows, p.cell_size, std::move(values), p.z_min, p.z_max);
  const double extent = std::min(map.extent_x(), map.extent_y());
  for (std::size_t b = 0; b < p.coastal_blobs; ++b) {
    const double cx = rng.uniform(0.0, map.extent_x());
    const double cy = rng.uniform(0.0, map.extent_y());
    const double radius = rng.uniform(p.blob_radius_min, p.blob_radius_max) * extent;
    for (std::size_t r = 0; r < map.rows(); ++r) {
      for (std::size_t c = 0; c < map.cols(); ++c) {
        const double x = (static_cast<double>(c) + 0.5) * p.cell_size;
        const double y = (static_cast<double>(r) + 0.5) * p.cell_size;
        if (std::hypot(x - cx, y - cy) <= radius) map.set_value(c, r, rng.uniform(0.0, kCoastalCeiling));
      }
    }
  }
  return map;
}

// Jittered lattice: one node per distinct lattice cell, perturbed by a
// Gaussian and kept only when it lands in water.
std::vector<Eigen::Vector3d> place_nodes(const ScenarioParams& p, const TerrainMap& map, std::size_t n,
                                         Rng& rng) {
  const double ex = map.extent_x();
  const double ey = map.extent_y();
  const auto gx = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n) * ex / ey)));
  const std::size_t gy = (n + gx - 1) / gx;
  std::vector<std::size_t> cells(gx * gy);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  shuffle(cells, rng);
  cells.resize(n);
  std::sort(cells.begin(), cells.end());

  const double margin = 0.5 * p.cell_size;
  std::vector<Eigen::Vector3d> nodes;
  for (std::size_t cell : cells) {
    const double bx = (static_cast<double>(cell % gx) + 0.5) / static_cast<double>(gx) * ex;
    const double by = (static_cast<double>(cell / gx) + 0.5) / static_cast<double>(gy) * ey;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const double x = std::clamp(bx + rng.normal(0.0, p.position_sigma * ex), margin, ex - margin);
      const double y = std::clamp(by + rng.normal(0.0, p.position_sigma * ey), margin, ey - margin);
      if (is_navigable(map, x, y)) {
        nodes.emplace_back(x, y, rng.uniform(p.z_min, p.z_max));
        break;
      }
    }
  }
  return nodes;
}

bool chord_in_water(const TerrainMap& map, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double h = (b.head<2>() - a.head<2>()).norm();
  const auto steps = static_cast<std::size_t>(std::ceil(h / (0.25 * map.cell_size()))) + 1;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double f = static_cast<double>(s) / static_cast<double>(steps);
    const Eigen::Vector3d q = a + f * (b - a);
    if (!is_navigable(map, q.x(), q.y())) return false;
  }
  return true;
}

}  // namespace

Scenario generate_scenario(const ScenarioParams& p, Rng& rng) {
  p.validate();
  const double slope = std::tan(deg_to_rad(p.max_edge_pitch_deg));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    TerrainMap map = make_terrain(p, rng);
    const std::size_t n = p.nodes_min + rng.index(p.nodes_max - p.nodes_min + 1);
    std::vector<Eigen::Vector3d> nodes = place_nodes(p, map, n, rng);
    const double max_len = p.max_edge_length * std::min(map.extent_x(), map.extent_y());

    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    DisjointSets components(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        const double h = (nodes[j].head<2>() - nodes[i].head<2>()).norm();
        if (h > max_len || std::abs(nodes[j].z() - nodes[i].z()) > slope * h) continue;
        if (!chord_in_water(map, nodes[i], nodes[j])) continue;
        candidates.emplace_back(i, j);
        components.unite(i, j);
      }
    }
    // Keep the largest component (lowest root on ties).
    std::vector<std::size_t> size(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) ++size[components.find(i)];
    const auto root = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
    if (size.empty() || size[root] < p.nodes_min) continue;

    std::vector<int> new_id(nodes.size(), -1);
    std::vector<Waypoint> waypoints;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (components.find(i) != root) continue;
      new_id[i] = static_cast<int>(waypoints.size());
      waypoints.push_back({new_id[i], nodes[i]});
    }
    std::vector<std::pair<int, int>> links;
    for (const auto& [i, j] : candidates) {
      if (new_id[i] >= 0 && new_id[j] >= 0) links.emplace_back(new_id[i], new_id[j]);
    }

    // Random spanning tree, then each node's nearest candidate links.
    shuffle(links, rng);
    std::set<std::pair<int, int>> chosen;
    DisjointSets tree(waypoints.size());
    for (const auto& [a, b] : links) {
      if (tree.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) chosen.insert(std::minmax(a, b));
    }
    auto distance = [&](int a, int b) {
      return (waypoints[static_cast<std::size_t>(a)].position - waypoints[static_cast<std::size_t>(b)].position).norm();
    };
    for (const Waypoint& w : waypoints) {
      std::vector<int> near;
      for (const auto& [a, b] : links) {
        if (a == w.id) near.push_back(b);
        if (b == w.id) near.push_back(a);
      }
      std::sort(near.begin(), near.end(), [&](int a, int b) {
        const double da = distance(w.id, a);
        const double db = distance(w.id, b);
        return da != db ? da < db : a < b;
      });
      for (std::size_t q = 0; q < std::min(p.nearest_links, near.size()); ++q) chosen.insert(std::minmax(w.id, near[q]));
    }
    if (chosen.size() < p.tasks) continue;

    std::vector<EdgeSpec> specs;
    for (const auto& [a, b] : chosen) specs.push_back({a, b, std::nullopt});
    std::vector<std::size_t> order(specs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
    const std::vector<Task> tasks = sample_tasks(p.tasks, rng);
    for (std::size_t t = 0; t < tasks.size(); ++t) specs[order[t]].task = tasks[t];

    Scenario s;
    s.cruise_speed = p.cruise_speed;
    s.graph = build_graph(waypoints, specs, p.cruise_speed);

    // Obstacles sit on edges long enough to detour around them.
    std::vector<std::size_t> hosts;
    for (std::size_t e = 0; e < s.graph.edges().size(); ++e) {
      if (s.graph.edge(e).distance >= 8.0 * p.obstacle_radius_max) hosts.push_back(e);
    }
    shuffle(hosts, rng);
    for (std::size_t q = 0; q < std::min(p.obstacles, hosts.size()); ++q) {
      const Edge& e = s.graph.edge(hosts[q]);
      const double radius = rng.uniform(p.obstacle_radius_min, p.obstacle_radius_max);
      s.obstacles.push_back(place_obstacle(s.graph.waypoint(e.a), s.graph.waypoint(e.b), p.obstacle_center_sigma,
                                           radius, p.obstacle_growth, rng));
    }

    for (std::size_t v = 0; v < p.vortices; ++v) {
      Vortex vx;
      vx.center = {rng.uniform(0.0, map.extent_x()), rng.uniform(0.0, map.extent_y())};
      vx.radius = rng.uniform(p.vortex_radius_min, p.vortex_radius_max);
      vx.strength = (rng.uniform() < 0.5 ? -1.0 : 1.0) * p.vortex_strength * vx.radius;
      s.current.vortices.push_back(vx);
    }

    const auto k = static_cast<int>(s.graph.size());
    s.start = static_cast<int>(rng.index(s.graph.size()));
    std::vector<double> fastest(s.graph.size(), 0.0);
    for (int node = 0; node < k; ++node) {
      if (node == s.start) continue;
      fastest[static_cast<std::size_t>(node)] = route_time(*fastest_route(s.graph, s.start, node, p.cruise_speed),
                                                           s.graph, p.cruise_speed);
    }
    int dest = -1;
    if (p.budget_factor) {
      for (int node = 0; node < k; ++node) {
        if (node != s.start && (dest < 0 || fastest[static_cast<std::size_t>(node)] > fastest[static_cast<std::size_t>(dest)])) {
          dest = node;
        }
      }
      s.budget = std::ceil(*p.budget_factor * fastest[static_cast<std::size_t>(dest)]);
    } else {
      const double reach = p.dest_budget_fraction * p.budget;
      for (int node = 0; node < k; ++node) {
        const double t = fastest[static_cast<std::size_t>(node)];
        if (node == s.start || t > reach) continue;
        if (dest < 0 || t > fastest[static_cast<std::size_t>(dest)]) dest = node;
      }
      if (dest < 0) {
        for (int node = 0; node < k; ++node) {
          if (node != s.start && (dest < 0 || fastest[static_cast<std::size_t>(node)] < fastest[static_cast<std::size_t>(dest)])) {
            dest = node;
          }
        }
      }
      s.budget = p.budget;
    }
    s.dest = dest;
    s.terrain = std::move(map);
    s.validate();
    return s;
  }
  throw PlanningError(ErrorCode::kParamsOutOfRange, "could not build a connected waypoint network");
}

}  // namespace auvplan
