#include "auvplan/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>

#include "auvplan/error.hpp"

namespace auvplan {

std::vector<Task> sample_tasks(std::size_t count, Rng& rng) {
  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Task t;
    t.id = static_cast<int>(i) + 1;
    t.priority = rng.uniform(kTaskPriorityMin, kTaskPriorityMax);
    t.risk = rng.uniform(kTaskRiskMin, kTaskRiskMax);
    t.duration = rng.uniform(kTaskDurationMin, kTaskDurationMax);
    tasks.push_back(t);
  }
  return tasks;
}

// ---------------------------------------------------------------------------

MissionGraph::MissionGraph(std::vector<Waypoint> waypoints, std::vector<Edge> edges)
    : waypoints_(std::move(waypoints)),
      edges_(std::move(edges)),
      active_(edges_.size(), true),
      adjacency_(waypoints_.size() * waypoints_.size(), -1) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    adjacency_[slot(edge.a, edge.b)] = static_cast<int>(e);
    adjacency_[slot(edge.b, edge.a)] = static_cast<int>(e);
  }
}

std::size_t MissionGraph::active_edge_count() const {
  return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
}

std::optional<std::size_t> MissionGraph::edge_between(int i, int j) const {
  if (!contains(i) || !contains(j)) return std::nullopt;
  const int e = adjacency_[slot(i, j)];
  if (e < 0) return std::nullopt;
  return static_cast<std::size_t>(e);
}

std::vector<int> MissionGraph::neighbors(int node) const {
  std::vector<int> out;
  if (!contains(node)) return out;
  const int k = static_cast<int>(waypoints_.size());
  for (int j = 0; j < k; ++j) {
    if (adjacency_[slot(node, j)] >= 0) out.push_back(j);
  }
  return out;
}

void MissionGraph::remove_edge(std::size_t edge_index) {
  if (!active_.at(edge_index)) return;
  active_[edge_index] = false;
  const Edge& edge = edges_[edge_index];
  adjacency_[slot(edge.a, edge.b)] = -1;
  adjacency_[slot(edge.b, edge.a)] = -1;
}

bool MissionGraph::connected(int from, int to) const {
  if (!contains(from) || !contains(to)) return false;
  if (from == to) return true;
  std::vector<bool> seen(waypoints_.size(), false);
  std::queue<int> frontier;
  frontier.push(from);
  seen[static_cast<std::size_t>(from)] = true;
  while (!frontier.empty()) {
    const int node = frontier.front();
    frontier.pop();
    for (int next : neighbors(node)) {
      if (next == to) return true;
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = true;
        frontier.push(next);
      }
    }
  }
  return false;
}

bool MissionGraph::is_connected() const {
  if (waypoints_.empty()) return true;
  for (int j = 1; j < static_cast<int>(waypoints_.size()); ++j) {
    if (!connected(0, j)) return false;
  }
  return true;
}

MissionGraph build_graph(std::vector<Waypoint> waypoints, std::span<const EdgeSpec> specs,
                         double cruise_speed) {
  if (!(cruise_speed > 0.0)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "cruise speed must be positive");
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (waypoints[i].id != static_cast<int>(i)) {
      throw PlanningError(ErrorCode::kUnknownWaypoint, "waypoint ids must equal their index");
    }
  }
  const int k = static_cast<int>(waypoints.size());
  std::set<std::pair<int, int>> seen_pairs;
  std::set<int> seen_tasks;
  std::vector<Edge> edges;
  edges.reserve(specs.size());
  for (const EdgeSpec& spec : specs) {
    if (spec.a < 0 || spec.a >= k || spec.b < 0 || spec.b >= k) {
      throw PlanningError(ErrorCode::kUnknownWaypoint,
                          "edge references unknown waypoint " + std::to_string(spec.a) + "-" +
                              std::to_string(spec.b));
    }
    Edge edge;
    edge.a = spec.a;
    edge.b = spec.b;
    edge.task = spec.task;
    edge.distance = (waypoints[static_cast<std::size_t>(spec.b)].position -
                     waypoints[static_cast<std::size_t>(spec.a)].position)
                        .norm();
    if (spec.a == spec.b || edge.distance == 0.0) {
      throw PlanningError(ErrorCode::kSelfLoop, "edge " + std::to_string(spec.a) + "-" +
                                                    std::to_string(spec.b) + " is a self-loop");
    }
    if (!seen_pairs.insert(std::minmax(spec.a, spec.b)).second) {
      throw PlanningError(ErrorCode::kDuplicateEdge, "edge " + std::to_string(spec.a) + "-" +
                                                         std::to_string(spec.b) + " listed twice");
    }
    if (spec.task) {
      if (!seen_tasks.insert(spec.task->id).second) {
        throw PlanningError(ErrorCode::kDuplicateTaskAssignment,
                            "task " + std::to_string(spec.task->id) + " assigned to several edges");
      }
      edge.weight = spec.task->priority / spec.task->risk;
    }
    edge.nominal_time = edge.distance / cruise_speed + edge.task_duration();
    edges.push_back(std::move(edge));
  }
  MissionGraph graph(std::move(waypoints), std::move(edges));
  if (!graph.is_connected()) {
    throw PlanningError(ErrorCode::kDisconnectedGraph, "waypoint graph is not connected");
  }
  return graph;
}

// ---------------------------------------------------------------------------

TerrainMap::TerrainMap(std::size_t cols, std::size_t rows, double cell_size,
                       std::vector<double> values, double z_min, double z_max)
    : cols_(cols), rows_(rows), cell_size_(cell_size), values_(std::move(values)), z_min_(z_min),
      z_max_(z_max) {
  if (cols_ == 0 || rows_ == 0) throw PlanningError(ErrorCode::kEmptyGrid, "terrain grid is empty");
  if (values_.size() != cols_ * rows_) {
    throw PlanningError(ErrorCode::kInvalidArgument, "terrain value count does not match shape");
  }
  if (!(cell_size_ > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "cell size must be positive");
  if (!(z_min_ < z_max_)) throw PlanningError(ErrorCode::kInvalidArgument, "depth range is empty");
}

TerrainMap TerrainMap::filled(std::size_t cols, std::size_t rows, double cell_size, double value,
                              double z_min, double z_max) {
  return TerrainMap(cols, rows, cell_size, std::vector<double>(cols * rows, value), z_min, z_max);
}

std::optional<std::pair<std::size_t, std::size_t>> TerrainMap::cell_of(double x, double y) const {
  if (!(x >= 0.0 && y >= 0.0 && x <= extent_x() && y <= extent_y())) return std::nullopt;
  const auto col = std::min(static_cast<std::size_t>(x / cell_size_), cols_ - 1);
  const auto row = std::min(static_cast<std::size_t>(y / cell_size_), rows_ - 1);
  return std::make_pair(col, row);
}

bool is_navigable(const TerrainMap& map, double x, double y) {
  const auto cell = map.cell_of(x, y);
  return cell && map.value(cell->first, cell->second) >= kNavigableThreshold;
}

TerrainMap classify_grid(const std::vector<std::vector<double>>& raw, double water_threshold,
                         double cell_size) {
  if (raw.empty() || raw.front().empty()) {
    throw PlanningError(ErrorCode::kEmptyGrid, "raw grid is empty");
  }
  const std::size_t rows = raw.size();
  const std::size_t cols = raw.front().size();
  std::vector<double> values;
  values.reserve(rows * cols);
  for (const auto& row : raw) {
    if (row.size() != cols) throw PlanningError(ErrorCode::kInvalidArgument, "ragged raw grid");
    for (double v : row) {
      if (!std::isfinite(v)) throw PlanningError(ErrorCode::kInvalidArgument, "non-finite grid value");
      values.push_back(v >= water_threshold ? 1.0 : std::clamp(v, 0.0, kCoastalCeiling));
    }
  }
  return TerrainMap(cols, rows, cell_size, std::move(values));
}

TerrainMap read_ascii_grid(std::istream& in) {
  std::size_t cols = 0;
  std::size_t rows = 0;
  double cell = 0.0;
  if (!(in >> cols >> rows >> cell)) {
    throw PlanningError(ErrorCode::kParseError, "grid header must be `cols rows cell_size`");
  }
  if (cols == 0 || rows == 0) throw PlanningError(ErrorCode::kEmptyGrid, "grid has no cells");
  std::vector<double> values(cols * rows);
  for (double& v : values) {
    if (!(in >> v)) throw PlanningError(ErrorCode::kParseError, "grid is missing values");
    if (!(v >= 0.0 && v <= 1.0)) throw PlanningError(ErrorCode::kParseError, "grid value outside [0,1]");
  }
  return TerrainMap(cols, rows, cell, std::move(values));
}

TerrainMap load_ascii_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanningError(ErrorCode::kIoError, "cannot open grid file " + path);
  return read_ascii_grid(in);
}

namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_ascii_grid(std::ostream& out, const TerrainMap& map) {
  out << map.cols() << ' ' << map.rows() << ' ';
  put_double(out, map.cell_size());
  out << '\n';
  for (std::size_t r = 0; r < map.rows(); ++r) {
    for (std::size_t c = 0; c < map.cols(); ++c) {
      if (c) out << ' ';
      put_double(out, map.value(c, r));
    }
    out << '\n';
  }
}

void save_ascii_grid(const std::string& path, const TerrainMap& map) {
  std::ofstream out(path);
  if (!out) throw PlanningError(ErrorCode::kIoError, "cannot write grid file " + path);
  write_ascii_grid(out, map);
  if (!out) throw PlanningError(ErrorCode::kIoError, "failed writing grid file " + path);
}

std::vector<Waypoint> sample_waypoints(const TerrainMap& map, std::size_t count, Rng& rng) {
  // Every cell has the same footprint, so picking a navigable cell uniformly and
  // then a point uniformly inside it is uniform over the navigable area.
  std::vector<std::size_t> water;
  for (std::size_t i = 0; i < map.values().size(); ++i) {
    if (map.values()[i] >= kNavigableThreshold) water.push_back(i);
  }
  if (water.empty()) throw PlanningError(ErrorCode::kNoNavigableArea, "map has no water cells");
  std::vector<Waypoint> out;
  out.reserve(count);
  const double cell = map.cell_size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t flat = water[rng.index(water.size())];
    const double col = static_cast<double>(flat % map.cols());
    const double row = static_cast<double>(flat / map.cols());
    Waypoint wp;
    wp.id = static_cast<int>(i);
    wp.position.x() = (col + rng.uniform()) * cell;
    wp.position.y() = (row + rng.uniform()) * cell;
    wp.position.z() = rng.uniform(map.z_min(), map.z_max());
    out.push_back(wp);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::Vector2d clamp_to_box(const Eigen::Vector2d& p, const Eigen::Vector2d& lo,
                             const Eigen::Vector2d& hi) {
  return p.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

Obstacle place_obstacle(const Waypoint& a, const Waypoint& b, double center_sigma,
                        double base_radius, double growth_rate, Rng& rng) {
  if (!(base_radius > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "obstacle radius must be positive");
  Obstacle obs;
  obs.anchor_a = a.id;
  obs.anchor_b = b.id;
  obs.center_sigma = center_sigma;
  obs.base_radius = base_radius;
  obs.growth_rate = growth_rate;
  const Eigen::Vector2d pa = a.position.head<2>();
  const Eigen::Vector2d pb = b.position.head<2>();
  obs.box_min = pa.cwiseMin(pb);
  obs.box_max = pa.cwiseMax(pb);
  const Eigen::Vector2d mid = 0.5 * (pa + pb);
  const double jx = rng.normal(0.0, center_sigma);
  const double jy = rng.normal(0.0, center_sigma);
  obs.center = clamp_to_box(mid + Eigen::Vector2d(jx, jy), obs.box_min, obs.box_max);
  return obs;
}

Disc realize_obstacle(const Obstacle& obstacle, double t, Rng& rng, double jitter_scale) {
  const double sigma = obstacle.base_radius * jitter_scale;
  const double jx = rng.normal(0.0, sigma);
  const double jy = rng.normal(0.0, sigma);
  Disc disc;
  disc.center = clamp_to_box(obstacle.center + Eigen::Vector2d(jx, jy), obstacle.box_min,
                             obstacle.box_max);
  disc.radius = obstacle.base_radius + obstacle.growth_rate * t;
  return disc;
}

// ---------------------------------------------------------------------------

double CurrentSample::magnitude() const { return std::hypot(u, v); }

Eigen::Vector2d current_uv(const CurrentField& field, double x, double y) {
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();
  for (const Vortex& vx : field.vortices) {
    const double dx = x - vx.center.x();
    const double dy = y - vx.center.y();
    const double r2 = dx * dx + dy * dy;
    const double l2 = vx.radius * vx.radius;
    // (1 - exp(-r^2/l^2)) / r^2, with its series near the core.
    double g;
    if (r2 < 1e-12 * l2) {
      g = (1.0 - 0.5 * r2 / l2) / l2;
    } else {
      g = -std::expm1(-r2 / l2) / r2;
    }
    const double f = vx.strength / (2.0 * std::numbers::pi) * g;
    uv.x() -= f * dy;
    uv.y() += f * dx;
  }
  return uv;
}

CurrentSample current_velocity(const CurrentField& field, double x, double y) {
  const Eigen::Vector2d uv = current_uv(field, x, y);
  CurrentSample s;
  s.u = uv.x();
  s.v = uv.y();
  s.heading = std::atan2(s.v, s.u);
  s.elevation = 0.0;
  return s;
}

}  // namespace auvplan
