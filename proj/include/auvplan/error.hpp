#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace auvplan {

enum class ErrorCode {
  kInvalidArgument,
  kNoNavigableArea,
  kDisconnectedGraph,
  kDuplicateTaskAssignment,
  kDuplicateEdge,
  kSelfLoop,
  kUnknownWaypoint,
  kEmptyGrid,
  kDegenerateControl,
  kPopulationTooSmall,
  kNoRouteExists,
  kScenarioInvalid,
  kParamsOutOfRange,
  kGraphTooLarge,
  kIoError,
  kParseError,
};

/// Stable identifier used in machine-readable error records.
std::string_view to_string(ErrorCode code) noexcept;

class PlanningError : public std::runtime_error {
 public:
  PlanningError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace auvplan
