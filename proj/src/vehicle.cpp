#include "auvplan/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "auvplan/error.hpp"

namespace auvplan {

Eigen::Matrix3d rotation_ned(double pitch, double yaw) {
  const double ct = std::cos(pitch);
  const double st = std::sin(pitch);
  const double cp = std::cos(yaw);
  const double sp = std::sin(yaw);
  Eigen::Matrix3d r;
  r << cp * ct, -sp, cp * st,
       sp * ct, cp, sp * st,
       -st, 0.0, ct;
  return r;
}

void VehicleBounds::validate() const {
  if (!(z_min < z_max)) throw PlanningError(ErrorCode::kInvalidArgument, "z_min must be below z_max");
  if (!(v_min < v_max)) throw PlanningError(ErrorCode::kInvalidArgument, "v_min must be below v_max");
  if (!(yaw_min < yaw_max)) throw PlanningError(ErrorCode::kInvalidArgument, "yaw_min must be below yaw_max");
  if (!(u_max > 0.0 && pitch_max > 0.0 && cruise_speed > 0.0)) {
    throw PlanningError(ErrorCode::kInvalidArgument, "u_max, pitch_max and cruise_speed must be positive");
  }
}

// ---------------------------------------------------------------------------

namespace {

// Span index for parameter u on a clamped knot vector with n control points.
std::size_t find_span(const std::vector<double>& knots, std::size_t n, int p, double u) {
  if (u >= knots[n]) return n - 1;
  auto lo = static_cast<std::size_t>(p);
  std::size_t hi = n;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (u < knots[mid]) hi = mid; else lo = mid;
  }
  return lo;
}

}  // namespace

BSplineBasis::BSplineBasis(std::size_t control_count, int degree, std::size_t sample_count) {
  if (control_count < 2) throw PlanningError(ErrorCode::kInvalidArgument, "need at least two control points");
  if (degree < 1) throw PlanningError(ErrorCode::kInvalidArgument, "spline degree must be >= 1");
  if (sample_count < 2) throw PlanningError(ErrorCode::kInvalidArgument, "need at least two samples");
  degree_ = std::min(degree, static_cast<int>(control_count) - 1);
  const int p = degree_;
  const std::size_t n = control_count;
  const std::size_t interior = n - static_cast<std::size_t>(p) - 1;
  knots_.assign(static_cast<std::size_t>(p) + 1, 0.0);
  for (std::size_t i = 1; i <= interior; ++i) {
    knots_.push_back(static_cast<double>(i) / static_cast<double>(interior + 1));
  }
  knots_.insert(knots_.end(), static_cast<std::size_t>(p) + 1, 1.0);

  matrix_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sample_count), static_cast<Eigen::Index>(n));
  params_.resize(sample_count);
  std::vector<double> left(static_cast<std::size_t>(p) + 1);
  std::vector<double> right(static_cast<std::size_t>(p) + 1);
  std::vector<double> basis(static_cast<std::size_t>(p) + 1);
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double u = static_cast<double>(s) / static_cast<double>(sample_count - 1);
    params_[s] = u;
    const std::size_t span = find_span(knots_, n, p, u);
    // Cox-de Boor triangle for the p+1 non-zero functions.
    basis[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      left[ju] = u - knots_[span + 1 - ju];
      right[ju] = knots_[span + ju] - u;
      double saved = 0.0;
      for (int r = 0; r < j; ++r) {
        const auto ru = static_cast<std::size_t>(r);
        const double denom = right[ru + 1] + left[ju - ru];
        const double temp = denom == 0.0 ? 0.0 : basis[ru] / denom;
        basis[ru] = saved + right[ru + 1] * temp;
        saved = left[ju - ru] * temp;
      }
      basis[ju] = saved;
    }
    const std::size_t first = span - static_cast<std::size_t>(p);
    first_.push_back(first);
    for (int j = 0; j <= p; ++j) {
      const double w = basis[static_cast<std::size_t>(j)];
      matrix_(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(first + static_cast<std::size_t>(j))) = w;
      weights_.push_back(w);
    }
  }
}

void BSplineBasis::evaluate(std::span<const Eigen::Vector3d> control, std::vector<Eigen::Vector3d>& out) const {
  if (control.size() != control_count()) {
    throw PlanningError(ErrorCode::kInvalidArgument, "basis does not match control polygon size");
  }
  const std::size_t width = static_cast<std::size_t>(degree_) + 1;
  out.resize(sample_count());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const double* w = &weights_[s * width];
    const Eigen::Vector3d* c = &control[first_[s]];
    Eigen::Vector3d acc = w[0] * c[0];
    for (std::size_t j = 1; j < width; ++j) acc += w[j] * c[j];
    out[s] = acc;
  }
  // Clamped ends interpolate the endpoints exactly.
  out.front() = control.front();
  out.back() = control.back();
}

// ---------------------------------------------------------------------------

void kinematic_states(std::span<const Eigen::Vector3d> positions, const CurrentField& field,
                      double cruise_speed, std::vector<PathState>& out) {
  out.resize(positions.size());
  double yaw = 0.0;
  double pitch = 0.0;
  // Direction cosines of the current chord; equal to cos/sin of the angles.
  double cos_pitch = 1.0;
  double sin_pitch = 0.0;
  double cos_yaw = 1.0;
  double sin_yaw = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (positions.size() >= 2) {
      const std::size_t a = k + 1 < positions.size() ? k : k - 1;
      const Eigen::Vector3d d = positions[a + 1] - positions[a];
      const double h2 = d.x() * d.x() + d.y() * d.y();
      const double horizontal = std::sqrt(h2);
      const double length = std::sqrt(h2 + d.z() * d.z());
      if (length > 0.0) {
        yaw = std::atan2(d.y(), d.x());
        pitch = std::atan2(-d.z(), horizontal);
        cos_pitch = horizontal / length;
        sin_pitch = -d.z() / length;
        cos_yaw = horizontal > 0.0 ? d.x() / horizontal : std::cos(yaw);
        sin_yaw = horizontal > 0.0 ? d.y() / horizontal : std::sin(yaw);
      }
    }
    const Eigen::Vector2d c = current_uv(field, positions[k].x(), positions[k].y());
    PathState& s = out[k];
    s.position = positions[k];
    s.yaw = yaw;
    s.pitch = pitch;
    s.surge = cruise_speed * cos_pitch * cos_yaw + c.x();
    s.sway = cruise_speed * cos_pitch * sin_yaw + c.y();
    s.heave = cruise_speed * sin_pitch;
  }
}

std::vector<PathState> kinematic_states(std::span<const Eigen::Vector3d> positions,
                                        const CurrentField& field, double cruise_speed) {
  std::vector<PathState> states;
  kinematic_states(positions, field, cruise_speed, states);
  return states;
}

namespace {

void require_non_degenerate(const ControlPolygon& control) {
  if (control.points.size() < 2) {
    throw PlanningError(ErrorCode::kInvalidArgument, "control polygon needs at least two points");
  }
  const Eigen::Vector3d& first = control.points.front();
  const bool all_same = std::all_of(control.points.begin(), control.points.end(),
                                    [&](const Eigen::Vector3d& p) { return p == first; });
  if (all_same) throw PlanningError(ErrorCode::kDegenerateControl, "all control points coincide");
}

}  // namespace

SampledPath build_path(const ControlPolygon& control, const BSplineBasis& basis,
                       const CurrentField& field, const VehicleBounds& bounds) {
  require_non_degenerate(control);
  if (basis.control_count() != control.points.size()) {
    throw PlanningError(ErrorCode::kInvalidArgument, "basis does not match control polygon size");
  }
  std::vector<Eigen::Vector3d> positions;
  basis.evaluate(control.points, positions);
  SampledPath path;
  path.states = kinematic_states(positions, field, bounds.cruise_speed);
  path.control = control;
  path.degree = basis.degree();
  return path;
}

SampledPath build_path(const ControlPolygon& control, int degree, std::size_t sample_count,
                       const CurrentField& field, const VehicleBounds& bounds) {
  require_non_degenerate(control);
  const BSplineBasis basis(control.points.size(), degree, sample_count);
  return build_path(control, basis, field, bounds);
}

double path_length(std::span<const Eigen::Vector3d> positions) {
  double length = 0.0;
  for (std::size_t k = 1; k < positions.size(); ++k) length += (positions[k] - positions[k - 1]).norm();
  return length;
}

double path_length(const SampledPath& path) {
  double length = 0.0;
  for (std::size_t k = 1; k < path.states.size(); ++k) {
    length += (path.states[k].position - path.states[k - 1].position).norm();
  }
  return length;
}

double path_travel_time(double length, double cruise_speed, double task_duration,
                        double cpu_seconds) {
  if (!(cruise_speed > 0.0)) throw PlanningError(ErrorCode::kInvalidArgument, "cruise speed must be positive");
  return length / cruise_speed + task_duration + cpu_seconds;
}

}  // namespace auvplan
