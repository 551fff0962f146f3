#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "auvplan/environment.hpp"
#include "auvplan/rng.hpp"
#include "auvplan/vehicle.hpp"

namespace auvplan {

/// Firefly optimizer settings. Defaults: 5 control points, 100 fireflies,
/// attraction 2, absorption 1, damping 0.96, initial randomness 0.4, 100
/// iterations.
struct FireflyConfig {
  std::size_t population = 100;
  std::size_t max_iterations = 100;
  std::size_t interior_points = 5;  // free control points between the fixed endpoints
  double attraction = 2.0;          // beta0
  double absorption = 1.0;          // light absorption
  double damping = 0.96;            // kappa in (0, 1)
  double randomness = 0.4;          // alpha0, in units of the search box extent
  double box_margin = 0.25;         // box growth per side, fraction of the segment chord
  std::size_t samples = 100;        // sampled states per path
  int degree = 3;
  double modeled_cpu_seconds = 1.0; // charged per plan unless measure_cpu is set
  bool measure_cpu = false;

  void validate() const;
};

/// Frame in which yaw, surge and sway limits are checked. kNed tests the
/// absolute NED values; kSegment first rotates them into the frame whose
/// x-axis points from the segment start to its goal.
enum class HeadingFrame { kNed, kSegment };

struct CostWeights {
  double depth_low = 1.0;
  double depth_high = 1.0;
  double surge = 1.0;
  double sway = 1.0;
  double pitch = 1.0;
  double yaw = 1.0;
  double collision = 1.0;
  /// Violation scale Q. When unset, 1e3 times the segment chord length.
  std::optional<double> scale;
  HeadingFrame heading_frame = HeadingFrame::kNed;

  void validate() const;
};

/// Per-kind constraint violation of one path. All kinds except collision are
/// summed over the sampled states; collision is a 0/1 indicator.
struct ViolationBreakdown {
  double depth_low = 0.0;
  double depth_high = 0.0;
  double surge = 0.0;
  double sway = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  double collision = 0.0;

  double weighted(const CostWeights& w) const;
  /// Weighted total with the state-summed kinds averaged over `samples`.
  double normalized(const CostWeights& w, std::size_t samples) const;

  ViolationBreakdown& operator+=(const ViolationBreakdown& o);
  ViolationBreakdown operator*(double s) const;
  bool operator==(const ViolationBreakdown&) const = default;
};

struct PathEvaluation {
  SampledPath path;
  double length = 0.0;
  ViolationBreakdown violations;
  double cost = 0.0;
};

struct IterationStats {
  double best_cost = 0.0;       // best-ever cost after the iteration
  double mean_cost = 0.0;       // population mean
  double mean_violation = 0.0;  // population mean of the normalized violation
  ViolationBreakdown mean_violations;  // population mean per kind
};

struct PlannedPath {
  SampledPath path;
  double length = 0.0;
  ViolationBreakdown violations;
  double cost = 0.0;
  double cpu_time = 0.0;
  std::vector<IterationStats> history;
  std::size_t evaluations = 0;
};

/// Attraction between fireflies at distance `distance`: beta0 * exp(-absorption * distance^2).
double attraction(double distance, double beta0, double absorption);

/// Brightness of a firefly with the given path cost; monotone decreasing.
inline double brightness(double cost) { return 1.0 / (1.0 + cost); }

/// Randomness scale at iteration t: alpha0 * damping^t.
double randomness_at(const FireflyConfig& cfg, std::size_t iteration);

/// Moves firefly `xi` towards the brighter `xj`:
///   xi' = xi + beta0 exp(-eps L^2) (xj - xi) + alpha_t * N(0, I)
/// with L = |xj - xi|. Positions live in the unit box [0,1]^d (the search box
/// normalized per axis) and the result is clamped back into it.
Eigen::VectorXd firefly_move(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                             std::size_t iteration, const FireflyConfig& cfg, Rng& rng);

/// Axis-aligned bounds for the free control points of one segment.
struct SearchBox {
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Zero();

  /// Start/goal corner box grown by `margin` * chord per side, clipped to the
  /// terrain extent and depth range when a terrain map is present.
  static SearchBox around(const Eigen::Vector3d& start, const Eigen::Vector3d& goal, double margin,
                          const Environment& env);

  Eigen::Vector3d decode(const Eigen::Vector3d& unit) const { return lo + unit.cwiseProduct(hi - lo); }
};

/// Builds the path for `control`, measures its length and violations, and
/// returns cost = length + Q * weighted violation. Obstacles are realized once
/// per call at `obstacle_time` using `rng`.
PathEvaluation evaluate_path(const ControlPolygon& control, const Environment& env,
                             const VehicleBounds& bounds, const CostWeights& weights,
                             double obstacle_time, Rng& rng, std::size_t samples = 100,
                             int degree = 3);

/// Firefly search for the B-spline between `start` and `goal`. Returns the
/// best firefly ever evaluated. Deterministic for a given rng state unless
/// cfg.measure_cpu is set.
PlannedPath plan_path(const Waypoint& start, const Waypoint& goal, const Environment& env,
                      const VehicleBounds& bounds, const CostWeights& weights,
                      const FireflyConfig& cfg, double obstacle_time, Rng& rng);

}  // namespace auvplan
