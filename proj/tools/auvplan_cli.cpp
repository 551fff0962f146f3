// Command-line front end. Every flag can also be set through an AUVPLAN_*
// environment variable (AUVPLAN_SEED, AUVPLAN_OUT, ...); flags win.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "auvplan/error.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/monte_carlo.hpp"
#include "auvplan/oracle.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/route_planner.hpp"
#include "auvplan/scenario.hpp"
#include "auvplan/serialization.hpp"

using namespace auvplan;

namespace {

struct Options {
  std::string out;
  std::string scenario;
  std::string params;
  std::string preset = "full";
  std::string export_dir;
  std::uint64_t seed = 1;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> tasks;
  std::optional<std::size_t> vortices;
  std::optional<double> budget;
  std::optional<int> from;
  std::optional<int> to;
  std::size_t runs = 10;
  std::size_t threads = 1;
  std::size_t max_nodes = kDefaultOracleNodeCap;
  std::vector<std::string> delays;
};

void emit(const Options& o, const Json& j) {
  if (o.out.empty() || o.out == "-") {
    std::cout << dump(j);
  } else {
    write_text_file(o.out, dump(j));
  }
}

MonteCarloParams load_params(const Options& o) {
  MonteCarloParams p = o.preset == "desk" ? desk_monte_carlo_params() : MonteCarloParams{};
  if (!o.params.empty()) {
    Json j = parse_json(read_text_file(o.params));
    if (!j.contains("preset")) j["preset"] = o.preset;
    p = monte_carlo_params_from_json(j);
  }
  return p;
}

Scenario require_scenario(const Options& o) {
  if (o.scenario.empty()) throw PlanningError(ErrorCode::kInvalidArgument, "--scenario is required");
  return load_scenario(o.scenario);
}

void gen_scenario(const Options& o) {
  ScenarioParams p = load_params(o).scenario;
  if (o.nodes) p.nodes_min = p.nodes_max = *o.nodes;
  if (o.tasks) p.tasks = *o.tasks;
  if (o.vortices) p.vortices = *o.vortices;
  if (o.budget) {
    p.budget = *o.budget;
    p.budget_factor.reset();
  }
  Rng rng(derive_seed(o.seed, 0));
  Scenario s = generate_scenario(p, rng);
  s.seed = o.seed;
  emit(o, to_json(s));
}

void plan_path_cmd(const Options& o) {
  const Scenario s = require_scenario(o);
  const MissionConfig cfg = load_params(o).mission;
  const int from = o.from.value_or(s.start);
  const int to = o.to.value_or(s.dest);
  if (!s.graph.contains(from) || !s.graph.contains(to)) {
    throw PlanningError(ErrorCode::kUnknownWaypoint, "--from/--to must be scenario waypoints");
  }
  VehicleBounds bounds = cfg.bounds;
  bounds.cruise_speed = s.cruise_speed;
  Rng rng(derive_seed(o.seed, 1));
  const PlannedPath path =
      plan_path(s.graph.waypoint(from), s.graph.waypoint(to), s.environment(), bounds, cfg.path_weights, cfg.firefly,
                0.0, rng);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "path";
  j["from"] = from;
  j["to"] = to;
  j["seed"] = o.seed;
  j["path"] = to_json(path, true);
  emit(o, j);
}

void plan_route_cmd(const Options& o) {
  const Scenario s = require_scenario(o);
  const MissionConfig cfg = load_params(o).mission;
  const double budget = o.budget.value_or(s.budget);
  const int from = o.from.value_or(s.start);
  RoutePlanOptions options;
  options.path_costs = estimated_path_costs(s.graph, s.cruise_speed, cfg.time_allowance,
                                            cfg.firefly.modeled_cpu_seconds);
  Rng rng(derive_seed(o.seed, 1));
  const RoutePlan plan =
      plan_route(s.graph, from, s.dest, budget, s.cruise_speed, cfg.evolution, cfg.route_weights, rng, options);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "route_plan";
  j["from"] = from;
  j["dest"] = s.dest;
  j["budget"] = budget;
  j["seed"] = o.seed;
  j["plan"] = to_json(plan);
  emit(o, j);
}

void run_mission_cmd(const Options& o) {
  const Scenario s = require_scenario(o);
  MissionConfig cfg = load_params(o).mission;
  for (const std::string& d : o.delays) {
    const auto eq = d.find('=');
    if (eq == std::string::npos) throw PlanningError(ErrorCode::kInvalidArgument, "--delay expects SEGMENT=SECONDS");
    try {
      cfg.injected_delays[std::stoul(d.substr(0, eq))] = std::stod(d.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw PlanningError(ErrorCode::kInvalidArgument, "--delay expects SEGMENT=SECONDS, got " + d);
    }
  }
  Rng rng(derive_seed(o.seed, 1));
  const MissionReport report = run_mission(s, cfg, rng);
  emit(o, to_json(report));
  if (!o.export_dir.empty()) export_report(report, s, o.export_dir);
}

void monte_carlo_cmd(const Options& o) {
  if (o.out.empty()) throw PlanningError(ErrorCode::kInvalidArgument, "--out directory is required");
  const MonteCarloParams p = load_params(o);
  const MonteCarloSummary summary = run_monte_carlo(o.runs, p, o.seed, o.threads);
  export_summary(summary, o.out);
  write_text_file(o.out + "/params.json", dump(to_json(p)));
}

void oracle_route_cmd(const Options& o) {
  const Scenario s = require_scenario(o);
  const MissionConfig cfg = load_params(o).mission;
  const double budget = o.budget.value_or(s.budget);
  const std::vector<double> costs =
      estimated_path_costs(s.graph, s.cruise_speed, cfg.time_allowance, cfg.firefly.modeled_cpu_seconds);
  const OracleResult result =
      brute_force_route_oracle(s.graph, s.start, s.dest, budget, s.cruise_speed, cfg.route_weights, costs, o.max_nodes);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "oracle_route";
  j["start"] = s.start;
  j["dest"] = s.dest;
  j["budget"] = budget;
  j["result"] = to_json(result);
  emit(o, j);
}

void fail(std::string_view code, std::string_view message) { std::cerr << dump(error_record(code, message)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AUV mission planner: scenarios, path/route planning, missions and Monte Carlo batches"};
  app.require_subcommand(1);
  Options o;

  auto seed = [&](CLI::App* cmd) { cmd->add_option("--seed", o.seed, "Random seed")->envname("AUVPLAN_SEED"); };
  auto out = [&](CLI::App* cmd, const char* help) { cmd->add_option("--out", o.out, help)->envname("AUVPLAN_OUT"); };
  auto scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "Scenario file")->envname("AUVPLAN_SCENARIO");
  };
  auto params = [&](CLI::App* cmd) {
    cmd->add_option("--params", o.params, "JSON parameter overrides")->envname("AUVPLAN_PARAMS");
    cmd->add_option("--preset", o.preset, "Base settings: full or desk")
        ->envname("AUVPLAN_PRESET")
        ->check(CLI::IsMember({"full", "desk"}));
  };

  auto* gen = app.add_subcommand("gen-scenario", "Generate a random scenario");
  gen->add_option("--nodes", o.nodes, "Exact waypoint count")->envname("AUVPLAN_NODES");
  gen->add_option("--tasks", o.tasks, "Task count")->envname("AUVPLAN_TASKS");
  gen->add_option("--vortices", o.vortices, "Vortex count")->envname("AUVPLAN_VORTICES");
  gen->add_option("--budget", o.budget, "Fixed time budget in seconds")->envname("AUVPLAN_BUDGET");
  seed(gen);
  out(gen, "Scenario file to write (stdout when omitted)");
  params(gen);

  auto* path = app.add_subcommand("plan-path", "Plan one B-spline path between two waypoints");
  scenario(path);
  path->add_option("--from", o.from, "Start waypoint (default: scenario start)")->envname("AUVPLAN_FROM");
  path->add_option("--to", o.to, "Goal waypoint (default: scenario destination)")->envname("AUVPLAN_TO");
  seed(path);
  out(path, "Output file");
  params(path);

  auto* route = app.add_subcommand("plan-route", "Plan a route over the waypoint graph");
  scenario(route);
  route->add_option("--budget", o.budget, "Time budget (default: scenario budget)")->envname("AUVPLAN_BUDGET");
  route->add_option("--from", o.from, "Start waypoint (default: scenario start)")->envname("AUVPLAN_FROM");
  seed(route);
  out(route, "Output file");
  params(route);

  auto* mission = app.add_subcommand("run-mission", "Run a full mission with re-routing");
  scenario(mission);
  seed(mission);
  out(mission, "Report file");
  mission->add_option("--export", o.export_dir, "Directory for CSV plot data")->envname("AUVPLAN_EXPORT");
  mission->add_option("--delay", o.delays, "Inject SEGMENT=SECONDS extra flight time")->envname("AUVPLAN_DELAY");
  params(mission);

  auto* mc = app.add_subcommand("monte-carlo", "Run a Monte Carlo batch");
  mc->add_option("--runs", o.runs, "Number of runs")->envname("AUVPLAN_RUNS")->check(CLI::PositiveNumber);
  mc->add_option("--threads", o.threads, "Worker threads")->envname("AUVPLAN_THREADS")->check(CLI::PositiveNumber);
  seed(mc);
  out(mc, "Output directory");
  params(mc);

  auto* oracle = app.add_subcommand("oracle-route", "Exhaustive optimal route (small graphs only)");
  scenario(oracle);
  oracle->add_option("--budget", o.budget, "Time budget (default: scenario budget)")->envname("AUVPLAN_BUDGET");
  oracle->add_option("--max-nodes", o.max_nodes, "Refuse graphs above this size")->envname("AUVPLAN_MAX_NODES");
  out(oracle, "Output file");
  params(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("UsageError", e.what());
    return 1;
  }

  try {
    if (*gen) gen_scenario(o);
    if (*path) plan_path_cmd(o);
    if (*route) plan_route_cmd(o);
    if (*mission) run_mission_cmd(o);
    if (*mc) monte_carlo_cmd(o);
    if (*oracle) oracle_route_cmd(o);
  } catch (const PlanningError& e) {
    fail(to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    fail("InternalError", e.what());
    return 3;
  }
  return 0;
}
