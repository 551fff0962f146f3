#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "auvplan/rng.hpp"

namespace auvplan {

// ---------------------------------------------------------------------------
// Tasks and the waypoint graph
// ---------------------------------------------------------------------------

/// A prioritized, risk-rated unit of work attached to a graph edge.
struct Task {
  int id = 0;
  double priority = 1.0;  // [1, 10]
  double risk = 100.0;    // percent, [1, 100]
  double duration = 20.0; // seconds, [20, 200]
};

inline constexpr double kTaskPriorityMin = 1.0;
inline constexpr double kTaskPriorityMax = 10.0;
inline constexpr double kTaskRiskMin = 1.0;  // lower clamp keeps priority/risk bounded
inline constexpr double kTaskRiskMax = 100.0;
inline constexpr double kTaskDurationMin = 20.0;
inline constexpr double kTaskDurationMax = 200.0;

/// Draws `count` tasks with ids 1..count.
std::vector<Task> sample_tasks(std::size_t count, Rng& rng);

struct Waypoint {
  int id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // x, y, depth (positive down)
};

/// Input to build_graph: an undirected connection and the task riding on it.
struct EdgeSpec {
  int a = 0;
  int b = 0;
  std::optional<Task> task;
};

struct Edge {
  int a = 0;
  int b = 0;
  std::optional<Task> task;
  double weight = 1.0;
  double distance = 0.0;
  double nominal_time = 0.0;

  int other(int node) const { return node == a ? b : a; }
  double task_duration() const { return task ? task->duration : 0.0; }
};

/// Undirected weighted waypoint network.
///
/// Waypoint ids equal their index. Edge indices are stable for the lifetime of
/// the graph: removing an edge only deactivates it, so routes planned on a
/// reduced copy still refer to the original edge list.
class MissionGraph {
 public:
  MissionGraph() = default;
  MissionGraph(std::vector<Waypoint> waypoints, std::vector<Edge> edges);

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Waypoint& waypoint(int id) const { return waypoints_.at(static_cast<std::size_t>(id)); }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }
  std::size_t size() const { return waypoints_.size(); }

  bool contains(int id) const { return id >= 0 && static_cast<std::size_t>(id) < waypoints_.size(); }
  bool is_active(std::size_t edge_index) const { return active_.at(edge_index); }
  std::size_t active_edge_count() const;

  /// Index of the active edge joining i and j, if any.
  std::optional<std::size_t> edge_between(int i, int j) const;
  bool adjacent(int i, int j) const { return edge_between(i, j).has_value(); }

  /// Active neighbours of `node` in increasing id order.
  std::vector<int> neighbors(int node) const;

  void remove_edge(std::size_t edge_index);

  bool connected(int from, int to) const;
  bool is_connected() const;

 private:
  std::size_t slot(int i, int j) const { return static_cast<std::size_t>(i) * waypoints_.size() + static_cast<std::size_t>(j); }

  std::vector<Waypoint> waypoints_;
  std::vector<Edge> edges_;
  std::vector<bool> active_;
  std::vector<int> adjacency_;  // k*k edge index, -1 when absent
};

/// Builds the graph and derives per-edge weight, distance and nominal time:
///   w = priority / risk for task edges, 1 otherwise
///   d = Euclidean distance between endpoints
///   t = d / cruise_speed + task duration
/// Throws SelfLoop, DuplicateEdge, UnknownWaypoint, DuplicateTaskAssignment or
/// DisconnectedGraph.
MissionGraph build_graph(std::vector<Waypoint> waypoints, std::span<const EdgeSpec> edges,
                         double cruise_speed);

// ---------------------------------------------------------------------------
// Terrain
// ---------------------------------------------------------------------------

inline constexpr double kNavigableThreshold = 0.5;
inline constexpr double kCoastalCeiling = 0.29;

/// Navigability raster. Cell (col, row) covers x in [col*cell, (col+1)*cell)
/// and y in [row*cell, (row+1)*cell). Water cells hold 1, coastal/uncertain
/// cells hold values below 0.3.
class TerrainMap {
 public:
  TerrainMap(std::size_t cols, std::size_t rows, double cell_size, std::vector<double> values,
             double z_min = 0.0, double z_max = 100.0);

  static TerrainMap filled(std::size_t cols, std::size_t rows, double cell_size, double value,
                           double z_min = 0.0, double z_max = 100.0);

  std::size_t cols() const { return cols_; }
  std::size_t rows() const { return rows_; }
  double cell_size() const { return cell_size_; }
  double extent_x() const { return static_cast<double>(cols_) * cell_size_; }
  double extent_y() const { return static_cast<double>(rows_) * cell_size_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  const std::vector<double>& values() const { return values_; }

  double value(std::size_t col, std::size_t row) const { return values_[row * cols_ + col]; }
  void set_value(std::size_t col, std::size_t row, double v) { values_[row * cols_ + col] = v; }

  /// Cell containing (x, y); points on the far boundary belong to the last cell.
  std::optional<std::pair<std::size_t, std::size_t>> cell_of(double x, double y) const;

  bool operator==(const TerrainMap&) const = default;

 private:
  std::size_t cols_;
  std::size_t rows_;
  double cell_size_;
  std::vector<double> values_;
  double z_min_;
  double z_max_;
};

/// True iff (x, y) lies inside the map extent and its cell value is >= 0.5.
bool is_navigable(const TerrainMap& map, double x, double y);

/// Maps a raw raster onto the two terrain classes: values >= threshold become
/// water (1), the rest become min(raw, 0.29). Rows are outer.
TerrainMap classify_grid(const std::vector<std::vector<double>>& raw, double water_threshold,
                         double cell_size = 35.0);

/// ASCII grid: header `cols rows cell_size`, then rows*cols reals, row-major.
TerrainMap read_ascii_grid(std::istream& in);
TerrainMap load_ascii_grid(const std::string& path);
void write_ascii_grid(std::ostream& out, const TerrainMap& map);
void save_ascii_grid(const std::string& path, const TerrainMap& map);

/// Waypoints uniform over the navigable area, depth uniform over the map's
/// depth range. Ids are 0..count-1. Throws NoNavigableArea.
std::vector<Waypoint> sample_waypoints(const TerrainMap& map, std::size_t count, Rng& rng);

// ---------------------------------------------------------------------------
// Obstacles
// ---------------------------------------------------------------------------

/// Uncertain disc obstacle (a vertical cylinder spanning all depths), anchored
/// to the box spanned by two waypoints.
struct Obstacle {
  int anchor_a = 0;
  int anchor_b = 0;
  double center_sigma = 0.0;
  double base_radius = 1.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Vector2d box_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d box_max = Eigen::Vector2d::Zero();
  double growth_rate = 0.0;  // m/s of simulated time
};

struct Disc {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;

  bool contains(double x, double y) const {
    const double dx = x - center.x();
    const double dy = y - center.y();
    return dx * dx + dy * dy <= radius * radius;
  }
};

/// Places an obstacle between waypoints a and b: nominal center at the
/// midpoint plus N(0, center_sigma) per axis, clamped to the anchor box.
Obstacle place_obstacle(const Waypoint& a, const Waypoint& b, double center_sigma,
                        double base_radius, double growth_rate, Rng& rng);

/// One realization of the obstacle at time t: center jittered by
/// N(0, base_radius) per axis (scaled by jitter_scale) and clamped to the
/// anchor box; radius = base_radius + growth_rate * t. Every call draws fresh
/// jitter.
Disc realize_obstacle(const Obstacle& obstacle, double t, Rng& rng, double jitter_scale = 1.0);

// ---------------------------------------------------------------------------
// Current field
// ---------------------------------------------------------------------------

/// Lamb vortex; strength is the signed circulation (m^2/s).
struct Vortex {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  double strength = 0.0;
};

struct CurrentField {
  std::vector<Vortex> vortices;
};

struct CurrentSample {
  double u = 0.0;
  double v = 0.0;
  double heading = 0.0;    // atan2(v, u)
  double elevation = 0.0;  // always 0 for the planar field
  double magnitude() const;
};

/// Superposed Lamb-vortex velocity at (x, y).
CurrentSample current_velocity(const CurrentField& field, double x, double y);

/// (u_c, v_c) only; skips the heading computation.
Eigen::Vector2d current_uv(const CurrentField& field, double x, double y);

/// Everything the path planner needs to know about the world. A missing
/// terrain map means unbounded open water.
struct Environment {
  std::optional<TerrainMap> terrain;
  std::vector<Obstacle> obstacles;
  CurrentField current;
};

}  // namespace auvplan
