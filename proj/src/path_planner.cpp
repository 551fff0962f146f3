#include "auvplan/path_planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "auvplan/error.hpp"

namespace auvplan {

void FireflyConfig::validate() const {
  if (population < 2) throw PlanningError(ErrorCode::kInvalidArgument, "firefly population must be >= 2");
  if (!(damping > 0.0 && damping < 1.0)) throw PlanningError(ErrorCode::kInvalidArgument, "damping must lie in (0, 1)");
  if (!(attraction > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "attraction must be positive");
  if (!(absorption >= 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "absorption must be non-negative");
  if (!(randomness >= 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "randomness must be non-negative");
  if (!(box_margin >= 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "box margin must be non-negative");
  if (interior_points < 1) throw PlanningError(ErrorCode::kInvalidArgument, "need at least one free control point");
  if (samples < 2) throw PlanningError(ErrorCode::kInvalidArgument, "need at least two samples");
  if (degree < 1) throw PlanningError(ErrorCode::kInvalidArgument, "spline degree must be >= 1");
  if (!(modeled_cpu_seconds >= 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "modeled CPU time must be >= 0");
}

void CostWeights::validate() const {
  for (double w : {depth_low, depth_high, surge, sway, pitch, yaw, collision}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw PlanningError(ErrorCode::kInvalidArgument, "violation weights must be finite and >= 0");
    }
  }
  if (scale && (!(*scale >= 0.0) || !std::isfinite(*scale))) {
    throw PlanningError(ErrorCode::kInvalidArgument, "violation scale must be finite and >= 0");
  }
}

double ViolationBreakdown::weighted(const CostWeights& w) const {
  return w.depth_low * depth_low + w.depth_high * depth_high + w.surge * surge + w.sway * sway +
         w.pitch * pitch + w.yaw * yaw + w.collision * collision;
}

double ViolationBreakdown::normalized(const CostWeights& w, std::size_t samples) const {
  const double per_state = w.depth_low * depth_low + w.depth_high * depth_high + w.surge * surge +
                           w.sway * sway + w.pitch * pitch + w.yaw * yaw;
  return per_state / static_cast<double>(std::max<std::size_t>(samples, 1)) + w.collision * collision;
}

ViolationBreakdown& ViolationBreakdown::operator+=(const ViolationBreakdown& o) {
  depth_low += o.depth_low;
  depth_high += o.depth_high;
  surge += o.surge;
  sway += o.sway;
  pitch += o.pitch;
  yaw += o.yaw;
  collision += o.collision;
  return *this;
}

ViolationBreakdown ViolationBreakdown::operator*(double s) const {
  return {depth_low * s, depth_high * s, surge * s, sway * s, pitch * s, yaw * s, collision * s};
}

// ---------------------------------------------------------------------------

double attraction(double distance, double beta0, double absorption) {
  return beta0 * std::exp(-absorption * distance * distance);
}

double randomness_at(const FireflyConfig& cfg, std::size_t iteration) {
  return cfg.randomness * std::pow(cfg.damping, static_cast<double>(iteration));
}

Eigen::VectorXd firefly_move(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                             std::size_t iteration, const FireflyConfig& cfg, Rng& rng) {
  const double beta = attraction((xj - xi).norm(), cfg.attraction, cfg.absorption);
  const double alpha = randomness_at(cfg, iteration);
  Eigen::VectorXd out = (1.0 - beta) * xi + beta * xj;
  if (alpha > 0.0) {
    for (Eigen::Index q = 0; q < out.size(); ++q) out[q] += alpha * rng.normal();
  }
  return out.cwiseMax(0.0).cwiseMin(1.0);
}

SearchBox SearchBox::around(const Eigen::Vector3d& start, const Eigen::Vector3d& goal,
                            double margin, const Environment& env) {
  const double grow = margin * (goal - start).norm();
  SearchBox box;
  box.lo = start.cwiseMin(goal).array() - grow;
  box.hi = start.cwiseMax(goal).array() + grow;
  if (env.terrain) {
    const TerrainMap& map = *env.terrain;
    const Eigen::Vector3d lim_lo(0.0, 0.0, map.z_min());
    const Eigen::Vector3d lim_hi(map.extent_x(), map.extent_y(), map.z_max());
    // Never clip away the endpoints themselves.
    box.lo = box.lo.cwiseMax(lim_lo.cwiseMin(start.cwiseMin(goal)));
    box.hi = box.hi.cwiseMin(lim_hi.cwiseMax(start.cwiseMax(goal)));
  }
  return box;
}

// ---------------------------------------------------------------------------

namespace {

double chord_heading(const ControlPolygon& control) {
  const Eigen::Vector3d d = control.points.back() - control.points.front();
  if (d.x() == 0.0 && d.y() == 0.0) return 0.0;
  return std::atan2(d.y(), d.x());
}

double default_scale(const CostWeights& weights, const ControlPolygon& control) {
  if (weights.scale) return *weights.scale;
  return 1e3 * (control.points.back() - control.points.front()).norm();
}

double excess(double value, double lo, double hi) { return std::max(0.0, lo - value) + std::max(0.0, value - hi); }

/// Accumulates the per-state violations of one path. The angle excesses are
/// supplied by the caller so the planner can skip atan2 for states that are
/// clearly inside the limits.
class ViolationMeter {
 public:
  ViolationMeter(const Environment& env, const VehicleBounds& bounds, const CostWeights& weights, double heading,
                 double obstacle_time, Rng& rng, std::vector<Disc>& discs)
      : env_(env), bounds_(bounds), heading_(heading), ch_(std::cos(heading)), sh_(std::sin(heading)),
        segment_frame_(weights.heading_frame == HeadingFrame::kSegment), discs_(discs) {
    discs_.clear();
    for (const Obstacle& obs : env.obstacles) discs_.push_back(realize_obstacle(obs, obstacle_time, rng));
  }

  double heading() const { return heading_; }
  double cos_heading() const { return ch_; }
  double sin_heading() const { return sh_; }

  double yaw_excess(double yaw) const {
    if (segment_frame_) {
      yaw -= heading_;  // both in (-pi, pi], so one wrap suffices
      if (yaw > std::numbers::pi) yaw -= 2.0 * std::numbers::pi;
      if (yaw <= -std::numbers::pi) yaw += 2.0 * std::numbers::pi;
    }
    return excess(yaw, bounds_.yaw_min, bounds_.yaw_max);
  }

  double pitch_excess(double pitch) const { return excess(pitch, -bounds_.pitch_max, bounds_.pitch_max); }

  void add(const Eigen::Vector3d& p, double surge, double sway, double yaw_excess, double pitch_excess) {
    const double z = p.z();
    v_.depth_low += std::max(0.0, bounds_.z_min - z);
    v_.depth_high += std::max(0.0, z - bounds_.z_max);
    if (segment_frame_) {
      const double s = surge * ch_ + sway * sh_;
      sway = -surge * sh_ + sway * ch_;
      surge = s;
    }
    v_.surge += std::max(0.0, surge - bounds_.u_max);
    v_.sway += excess(sway, bounds_.v_min, bounds_.v_max);
    v_.pitch += pitch_excess;
    v_.yaw += yaw_excess;
    if (!collided_) {
      if (env_.terrain && !is_navigable(*env_.terrain, p.x(), p.y())) {
        collided_ = true;
      } else {
        collided_ = std::any_of(discs_.begin(), discs_.end(), [&](const Disc& d) { return d.contains(p.x(), p.y()); });
      }
    }
  }

  ViolationBreakdown result() const {
    ViolationBreakdown v = v_;
    v.collision = collided_ ? 1.0 : 0.0;
    return v;
  }

 private:
  const Environment& env_;
  const VehicleBounds& bounds_;
  double heading_;
  double ch_;
  double sh_;
  bool segment_frame_;
  std::vector<Disc>& discs_;
  ViolationBreakdown v_;
  bool collided_ = false;
};

struct Score {
  double length = 0.0;
  ViolationBreakdown violations;
  double cost = 0.0;
};

Score score_states(const std::vector<PathState>& states, const ControlPolygon& control,
                   const Environment& env, const VehicleBounds& bounds, const CostWeights& weights,
                   double obstacle_time, Rng& rng, std::vector<Disc>& discs) {
  Score s;
  for (std::size_t k = 1; k < states.size(); ++k) {
    s.length += (states[k].position - states[k - 1].position).norm();
  }
  ViolationMeter meter(env, bounds, weights, chord_heading(control), obstacle_time, rng, discs);
  for (const PathState& st : states) {
    meter.add(st.position, st.surge, st.sway, meter.yaw_excess(st.yaw), meter.pitch_excess(st.pitch));
  }
  s.violations = meter.result();
  s.cost = s.length + default_scale(weights, control) * s.violations.weighted(weights);
  return s;
}

/// Same result as kinematic_states followed by score_states, bit for bit,
/// but evaluates atan2 only for chords near or beyond an angle limit.
Score score_positions(const std::vector<Eigen::Vector3d>& positions, const ControlPolygon& control,
                      const Environment& env, const VehicleBounds& bounds, const CostWeights& weights,
                      double obstacle_time, Rng& rng, std::vector<Disc>& discs) {
  Score s;
  for (std::size_t k = 1; k < positions.size(); ++k) s.length += (positions[k] - positions[k - 1]).norm();

  ViolationMeter meter(env, bounds, weights, chord_heading(control), obstacle_time, rng, discs);
  // Slope tests are only valid while the limits stay inside a half-plane;
  // the 1e-9 margin keeps them clear of atan2 rounding.
  constexpr double kMargin = 1e-9;
  const double half_pi = 0.5 * std::numbers::pi;
  const bool fast_pitch = bounds.pitch_max < half_pi;
  const bool fast_yaw = bounds.yaw_min > -half_pi && bounds.yaw_max < half_pi;
  const double tan_pitch = fast_pitch ? std::tan(bounds.pitch_max) : 0.0;
  const double tan_yaw_lo = fast_yaw ? std::tan(bounds.yaw_min) : 0.0;
  const double tan_yaw_hi = fast_yaw ? std::tan(bounds.yaw_max) : 0.0;
  const double ch = weights.heading_frame == HeadingFrame::kSegment ? meter.cos_heading() : 1.0;
  const double sh = weights.heading_frame == HeadingFrame::kSegment ? meter.sin_heading() : 0.0;
  const double speed = bounds.cruise_speed;

  double cos_pitch = 1.0;
  double cos_yaw = 1.0;
  double sin_yaw = 0.0;
  double yaw_ex = meter.yaw_excess(0.0);
  double pitch_ex = meter.pitch_excess(0.0);
  const std::size_t n = positions.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (n >= 2) {
      const std::size_t a = k + 1 < n ? k : k - 1;
      const Eigen::Vector3d d = positions[a + 1] - positions[a];
      const double h2 = d.x() * d.x() + d.y() * d.y();
      const double horizontal = std::sqrt(h2);
      const double length = std::sqrt(h2 + d.z() * d.z());
      if (length > 0.0) {
        cos_pitch = horizontal / length;
        if (horizontal > 0.0) {
          cos_yaw = d.x() / horizontal;
          sin_yaw = d.y() / horizontal;
          const bool pitch_inside = fast_pitch && std::abs(d.z()) < tan_pitch * horizontal * (1.0 - kMargin);
          const double rc = cos_yaw * ch + sin_yaw * sh;
          const double rs = sin_yaw * ch - cos_yaw * sh;
          const bool yaw_inside =
              fast_yaw && rc > 0.0 && rs < rc * tan_yaw_hi - kMargin && rs > rc * tan_yaw_lo + kMargin;
          pitch_ex = pitch_inside ? 0.0 : meter.pitch_excess(std::atan2(-d.z(), horizontal));
          yaw_ex = yaw_inside ? 0.0 : meter.yaw_excess(std::atan2(d.y(), d.x()));
        } else {
          const double yaw = std::atan2(d.y(), d.x());
          cos_yaw = std::cos(yaw);
          sin_yaw = std::sin(yaw);
          pitch_ex = meter.pitch_excess(std::atan2(-d.z(), horizontal));
          yaw_ex = meter.yaw_excess(yaw);
        }
      }
    }
    const Eigen::Vector2d c = current_uv(env.current, positions[k].x(), positions[k].y());
    const double surge = speed * cos_pitch * cos_yaw + c.x();
    const double sway = speed * cos_pitch * sin_yaw + c.y();
    meter.add(positions[k], surge, sway, yaw_ex, pitch_ex);
  }
  s.violations = meter.result();
  s.cost = s.length + default_scale(weights, control) * s.violations.weighted(weights);
  return s;
}

}  // namespace

PathEvaluation evaluate_path(const ControlPolygon& control, const Environment& env,
                             const VehicleBounds& bounds, const CostWeights& weights,
                             double obstacle_time, Rng& rng, std::size_t samples, int degree) {
  PathEvaluation out;
  out.path = build_path(control, degree, samples, env.current, bounds);
  std::vector<Disc> discs;
  const Score s = score_states(out.path.states, control, env, bounds, weights, obstacle_time, rng, discs);
  out.length = s.length;
  out.violations = s.violations;
  out.cost = s.cost;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class SegmentProblem {
 public:
  SegmentProblem(const Waypoint& start, const Waypoint& goal, const Environment& env,
                 const VehicleBounds& bounds, const CostWeights& weights, const FireflyConfig& cfg,
                 double obstacle_time)
      : start_(start.position), goal_(goal.position), env_(env), bounds_(bounds),
        weights_(weights), cfg_(cfg), obstacle_time_(obstacle_time),
        box_(SearchBox::around(start.position, goal.position, cfg.box_margin, env)),
        basis_(cfg.interior_points + 2, cfg.degree, cfg.samples) {
    control_.points.resize(cfg.interior_points + 2);
    control_.points.front() = start_;
    control_.points.back() = goal_;
  }

  std::size_t dimension() const { return 3 * cfg_.interior_points; }

  const ControlPolygon& decode(const Eigen::VectorXd& x) {
    for (std::size_t p = 0; p < cfg_.interior_points; ++p) {
      control_.points[p + 1] = box_.decode(x.segment<3>(static_cast<Eigen::Index>(3 * p)));
    }
    return control_;
  }

  Score evaluate(const Eigen::VectorXd& x, Rng& rng) {
    decode(x);
    basis_.evaluate(control_.points, positions_);
    return score_positions(positions_, control_, env_, bounds_, weights_, obstacle_time_, rng, discs_);
  }

  SampledPath path_for(const Eigen::VectorXd& x) {
    return build_path(decode(x), basis_, env_.current, bounds_);
  }

 private:
  Eigen::Vector3d start_;
  Eigen::Vector3d goal_;
  const Environment& env_;
  const VehicleBounds& bounds_;
  const CostWeights& weights_;
  const FireflyConfig& cfg_;
  double obstacle_time_;
  SearchBox box_;
  BSplineBasis basis_;
  ControlPolygon control_;
  std::vector<Disc> discs_;
  std::vector<Eigen::Vector3d> positions_;
};

}  // namespace

PlannedPath plan_path(const Waypoint& start, const Waypoint& goal, const Environment& env,
                      const VehicleBounds& bounds, const CostWeights& weights,
                      const FireflyConfig& cfg, double obstacle_time, Rng& rng) {
  cfg.validate();
  weights.validate();
  bounds.validate();
  if (start.position == goal.position) {
    throw PlanningError(ErrorCode::kInvalidArgument, "path start and goal coincide");
  }
  const auto clock_start = std::chrono::steady_clock::now();

  SegmentProblem problem(start, goal, env, bounds, weights, cfg, obstacle_time);
  const std::size_t n = cfg.population;
  const auto dim = static_cast<Eigen::Index>(problem.dimension());

  std::vector<Eigen::VectorXd> swarm(n);
  std::vector<Score> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    swarm[i].resize(dim);
    for (Eigen::Index q = 0; q < dim; ++q) swarm[i][q] = rng.uniform();
    scores[i] = problem.evaluate(swarm[i], rng);
  }
  std::size_t evaluations = n;

  auto best_index = static_cast<std::size_t>(
      std::min_element(scores.begin(), scores.end(), [](const Score& a, const Score& b) { return a.cost < b.cost; }) -
      scores.begin());
  Eigen::VectorXd best_x = swarm[best_index];
  Score best = scores[best_index];

  PlannedPath out;
  out.history.reserve(cfg.max_iterations);
  std::vector<std::size_t> order(n);
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    // Rank: brightest first, ties broken by index for reproducibility.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a].cost < scores[b].cost; });
    std::vector<Eigen::VectorXd> ranked(n);
    std::vector<Score> ranked_scores(n);
    for (std::size_t r = 0; r < n; ++r) {
      ranked[r] = std::move(swarm[order[r]]);
      ranked_scores[r] = scores[order[r]];
    }
    swarm = std::move(ranked);
    scores = std::move(ranked_scores);

    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (!(scores[j].cost < scores[i].cost)) continue;
        swarm[i] = firefly_move(swarm[i], swarm[j], t, cfg, rng);
        scores[i] = problem.evaluate(swarm[i], rng);
        ++evaluations;
        if (scores[i].cost < best.cost) {
          best = scores[i];
          best_x = swarm[i];
        }
      }
    }

    IterationStats stats;
    stats.best_cost = best.cost;
    for (const Score& s : scores) {
      stats.mean_cost += s.cost;
      stats.mean_violation += s.violations.normalized(weights, cfg.samples);
      stats.mean_violations += s.violations;
    }
    const double inv = 1.0 / static_cast<double>(n);
    stats.mean_cost *= inv;
    stats.mean_violation *= inv;
    stats.mean_violations = stats.mean_violations * inv;
    out.history.push_back(stats);
  }

  out.path = problem.path_for(best_x);
  out.length = best.length;
  out.violations = best.violations;
  out.cost = best.cost;
  out.evaluations = evaluations;
  if (cfg.measure_cpu) {
    out.cpu_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  } else {
    out.cpu_time = cfg.modeled_cpu_seconds;
  }
  return out;
}

}  // namespace auvplan
