#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "auvplan/error.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/monte_carlo.hpp"
#include "auvplan/oracle.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/route_planner.hpp"
#include "auvplan/scenario.hpp"

namespace auvplan {

using Json = nlohmann::ordered_json;

/// Bumped whenever a field changes meaning or disappears.
inline constexpr int kSchemaVersion = 1;

Json to_json(const Scenario& scenario);
/// Rebuilds the graph from waypoints and edge specs; derived edge fields in
/// the file are ignored. Throws ParseError or the graph/scenario errors.
Scenario scenario_from_json(const Json& j);

Json to_json(const ViolationBreakdown& v);
Json to_json(const PlannedPath& path, bool include_states);
Json to_json(const Route& route);
Json to_json(const RoutePlan& plan);
Json to_json(const OracleResult& result);
Json to_json(const MissionReport& report);
Json to_json(const RunRecord& run);
Json to_json(const Stats& stats);
Json to_json(const Aggregates& aggregates);
Json to_json(const MonteCarloSummary& summary);

Json to_json(const ScenarioParams& params);
Json to_json(const MissionConfig& config);
Json to_json(const MonteCarloParams& params);
/// Starts from the preset named by "preset" ("full", the default, or
/// "desk") and overrides only the fields present.
MonteCarloParams monte_carlo_params_from_json(const Json& j);

/// {"error": {"code": ..., "message": ...}}
Json error_record(std::string_view code, std::string_view message);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);
Json parse_json(std::string_view text);

std::string read_text_file(const std::string& path);
/// Throws IoError.
void write_text_file(const std::string& path, const std::string& content);

void save_scenario(const std::string& path, const Scenario& scenario);
Scenario load_scenario(const std::string& path);

/// Writes report.json plus, per segment, the sampled path polyline and the
/// optimizer history as CSV, the route sequence table and a current-field
/// raster sampled at the terrain cell centres.
void export_report(const MissionReport& report, const Scenario& scenario, const std::string& out_dir);

/// Writes summary.json, quantiles.csv, time_pairs.csv and one report (and
/// scenario) file per run under runs/.
void export_summary(const MonteCarloSummary& summary, const std::string& out_dir);

}  // namespace auvplan
