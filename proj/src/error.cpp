#include "auvplan/error.hpp"

namespace auvplan {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoNavigableArea: return "NoNavigableArea";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kDuplicateTaskAssignment: return "DuplicateTaskAssignment";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kUnknownWaypoint: return "UnknownWaypoint";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kDegenerateControl: return "DegenerateControl";
    case ErrorCode::kPopulationTooSmall: return "PopulationTooSmall";
    case ErrorCode::kNoRouteExists: return "NoRouteExists";
    case ErrorCode::kScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::kParamsOutOfRange: return "ParamsOutOfRange";
    case ErrorCode::kGraphTooLarge: return "GraphTooLarge";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace auvplan
