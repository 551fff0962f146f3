#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "auvplan/environment.hpp"

namespace auvplan {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Body-to-NED rotation for pitch `pitch` and yaw `yaw` (roll fixed at zero):
///   [ cψcθ  -sψ  cψsθ ]
///   [ sψcθ   cψ  sψsθ ]
///   [ -sθ    0   cθ   ]
Eigen::Matrix3d rotation_ned(double pitch, double yaw);

/// B-spline control points; the first and last are the segment endpoints.
struct ControlPolygon {
  std::vector<Eigen::Vector3d> points;
};

/// One sampled vehicle state along a path.
///
/// Angles follow the NED convention with depth positive down: yaw is
/// atan2(dy, dx) in (-pi, pi], pitch is positive nose-up, so a descending
/// segment has negative pitch. surge/sway/heave are the cruise speed resolved
/// through those angles plus the local current.
struct PathState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double yaw = 0.0;
  double pitch = 0.0;
  double surge = 0.0;
  double sway = 0.0;
  double heave = 0.0;
};

struct SampledPath {
  std::vector<PathState> states;
  ControlPolygon control;
  int degree = 3;

  std::size_t sample_count() const { return states.size(); }
};

/// Operating limits, defaults as configured for the local planner evaluation.
struct VehicleBounds {
  double z_min = 0.0;
  double z_max = 100.0;
  double u_max = 2.7;
  double v_min = -0.5;
  double v_max = 0.5;
  double pitch_max = deg_to_rad(20.0);
  double yaw_min = deg_to_rad(-17.0);
  double yaw_max = deg_to_rad(17.0);
  double cruise_speed = 2.0;

  /// Throws InvalidArgument when the bounds are inconsistent.
  void validate() const;
};

/// Clamped uniform B-spline basis evaluated at `sample_count` equally spaced
/// parameters in [0, 1]. Row s holds the blending weights of sample s.
///
/// The degree is capped at control_count - 1 so two-point polygons still
/// produce a (straight) curve.
class BSplineBasis {
 public:
  BSplineBasis(std::size_t control_count, int degree, std::size_t sample_count);

  std::size_t control_count() const { return static_cast<std::size_t>(matrix_.cols()); }
  std::size_t sample_count() const { return static_cast<std::size_t>(matrix_.rows()); }
  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& parameters() const { return params_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Sampled curve points for the given control points.
  void evaluate(std::span<const Eigen::Vector3d> control, std::vector<Eigen::Vector3d>& out) const;

 private:
  int degree_;
  std::vector<std::size_t> first_;  // first non-zero column of each row
  std::vector<double> weights_;     // the degree+1 non-zero weights of each row
  std::vector<double> knots_;
  std::vector<double> params_;
  Eigen::MatrixXd matrix_;
};

/// Attaches angles and current-coupled velocities to a sequence of sampled
/// positions. Angles of state k come from the chord to state k+1; the last
/// state reuses the previous chord.
std::vector<PathState> kinematic_states(std::span<const Eigen::Vector3d> positions,
                                        const CurrentField& field, double cruise_speed);
void kinematic_states(std::span<const Eigen::Vector3d> positions, const CurrentField& field,
                      double cruise_speed, std::vector<PathState>& out);

/// Samples the clamped B-spline through `control` and resolves the vehicle
/// kinematics along it. Throws DegenerateControl when every control point
/// coincides.
SampledPath build_path(const ControlPolygon& control, int degree, std::size_t sample_count,
                       const CurrentField& field, const VehicleBounds& bounds);
SampledPath build_path(const ControlPolygon& control, const BSplineBasis& basis,
                       const CurrentField& field, const VehicleBounds& bounds);

/// Sum of 3-D chords between consecutive states.
double path_length(const SampledPath& path);
double path_length(std::span<const Eigen::Vector3d> positions);

/// T = length / cruise_speed + task_duration + cpu_seconds.
double path_travel_time(double length, double cruise_speed, double task_duration,
                        double cpu_seconds);

}  // namespace auvplan
