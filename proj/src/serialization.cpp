#include "auvplan/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace auvplan {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw PlanningError(ErrorCode::kParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field `") + key + "`");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("field `") + key + "`: " + e.what());
  }
}

// Overwrites `out` only when the key is present.
template <typename T>
void maybe(const Json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key)) out = get<T>(j, key);
}

Json vec(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json vec(const Eigen::Vector2d& v) { return Json::array({v.x(), v.y()}); }

Eigen::Vector2d vec2(const Json& j, const char* key) {
  const auto a = get<std::vector<double>>(j, key);
  if (a.size() != 2) parse_fail(std::string("field `") + key + "` must have two entries");
  return {a[0], a[1]};
}

Json task_json(const Task& t) {
  return {{"id", t.id}, {"priority", t.priority}, {"risk", t.risk}, {"duration", t.duration}};
}

Task task_from(const Json& j) {
  return {get<int>(j, "id"), get<double>(j, "priority"), get<double>(j, "risk"), get<double>(j, "duration")};
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string padded(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03zu", i);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario

Json to_json(const Scenario& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "scenario";
  j["seed"] = s.seed;
  j["start"] = s.start;
  j["dest"] = s.dest;
  j["budget"] = s.budget;
  j["cruise_speed"] = s.cruise_speed;
  if (s.terrain) {
    std::ostringstream grid;
    write_ascii_grid(grid, *s.terrain);
    j["terrain"] = {{"z_min", s.terrain->z_min()}, {"z_max", s.terrain->z_max()}, {"grid", grid.str()}};
  } else {
    j["terrain"] = nullptr;
  }
  Json waypoints = Json::array();
  for (const Waypoint& w : s.graph.waypoints()) {
    waypoints.push_back({{"id", w.id}, {"x", w.position.x()}, {"y", w.position.y()}, {"z", w.position.z()}});
  }
  j["waypoints"] = std::move(waypoints);
  Json edges = Json::array();
  for (const Edge& e : s.graph.edges()) {
    edges.push_back({{"a", e.a},
                     {"b", e.b},
                     {"task", e.task ? task_json(*e.task) : Json(nullptr)},
                     {"weight", e.weight},
                     {"distance", e.distance},
                     {"nominal_time", e.nominal_time}});
  }
  j["edges"] = std::move(edges);
  Json obstacles = Json::array();
  for (const Obstacle& o : s.obstacles) {
    obstacles.push_back({{"anchor_a", o.anchor_a},
                         {"anchor_b", o.anchor_b},
                         {"center_sigma", o.center_sigma},
                         {"base_radius", o.base_radius},
                         {"center", vec(o.center)},
                         {"box_min", vec(o.box_min)},
                         {"box_max", vec(o.box_max)},
                         {"growth_rate", o.growth_rate}});
  }
  j["obstacles"] = std::move(obstacles);
  Json vortices = Json::array();
  for (const Vortex& v : s.current.vortices) {
    vortices.push_back({{"x", v.center.x()}, {"y", v.center.y()}, {"radius", v.radius}, {"strength", v.strength}});
  }
  j["vortices"] = std::move(vortices);
  return j;
}

Scenario scenario_from_json(const Json& j) {
  if (get<int>(j, "schema_version") != kSchemaVersion) parse_fail("unsupported schema_version");
  if (get<std::string>(j, "kind") != "scenario") parse_fail("document is not a scenario");
  Scenario s;
  s.seed = get<std::uint64_t>(j, "seed");
  s.start = get<int>(j, "start");
  s.dest = get<int>(j, "dest");
  s.budget = get<double>(j, "budget");
  s.cruise_speed = get<double>(j, "cruise_speed");
  const Json& terrain = field(j, "terrain");
  if (!terrain.is_null()) {
    std::istringstream grid(get<std::string>(terrain, "grid"));
    const TerrainMap raw = read_ascii_grid(grid);
    s.terrain = TerrainMap(raw.cols(), raw.rows(), raw.cell_size(), raw.values(), get<double>(terrain, "z_min"),
                           get<double>(terrain, "z_max"));
  }
  std::vector<Waypoint> waypoints;
  for (const Json& w : field(j, "waypoints")) {
    waypoints.push_back({get<int>(w, "id"), {get<double>(w, "x"), get<double>(w, "y"), get<double>(w, "z")}});
  }
  std::vector<EdgeSpec> specs;
  for (const Json& e : field(j, "edges")) {
    EdgeSpec spec{get<int>(e, "a"), get<int>(e, "b"), std::nullopt};
    if (!field(e, "task").is_null()) spec.task = task_from(e.at("task"));
    specs.push_back(spec);
  }
  s.graph = build_graph(std::move(waypoints), specs, s.cruise_speed);
  for (const Json& o : field(j, "obstacles")) {
    Obstacle obs;
    obs.anchor_a = get<int>(o, "anchor_a");
    obs.anchor_b = get<int>(o, "anchor_b");
    obs.center_sigma = get<double>(o, "center_sigma");
    obs.base_radius = get<double>(o, "base_radius");
    obs.center = vec2(o, "center");
    obs.box_min = vec2(o, "box_min");
    obs.box_max = vec2(o, "box_max");
    obs.growth_rate = get<double>(o, "growth_rate");
    s.obstacles.push_back(obs);
  }
  for (const Json& v : field(j, "vortices")) {
    s.current.vortices.push_back(
        {{get<double>(v, "x"), get<double>(v, "y")}, get<double>(v, "radius"), get<double>(v, "strength")});
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Planner outputs

Json to_json(const ViolationBreakdown& v) {
  return {{"depth_low", v.depth_low}, {"depth_high", v.depth_high}, {"surge", v.surge}, {"sway", v.sway},
          {"pitch", v.pitch},         {"yaw", v.yaw},               {"collision", v.collision}};
}

Json to_json(const PlannedPath& p, bool include_states) {
  Json j;
  j["length"] = p.length;
  j["cost"] = p.cost;
  j["cpu_time"] = p.cpu_time;
  j["evaluations"] = p.evaluations;
  j["violations"] = to_json(p.violations);
  Json control = Json::array();
  for (const Eigen::Vector3d& c : p.path.control.points) control.push_back(vec(c));
  j["control_points"] = std::move(control);
  Json best = Json::array();
  Json mean_violation = Json::array();
  for (const IterationStats& it : p.history) {
    best.push_back(it.best_cost);
    mean_violation.push_back(it.mean_violation);
  }
  j["best_cost_history"] = std::move(best);
  j["mean_violation_history"] = std::move(mean_violation);
  if (include_states) {
    Json states = Json::array();
    for (const PathState& s : p.path.states) {
      states.push_back({{"x", s.position.x()}, {"y", s.position.y()}, {"z", s.position.z()}, {"yaw", s.yaw},
                        {"pitch", s.pitch}, {"surge", s.surge}, {"sway", s.sway}, {"heave", s.heave}});
    }
    j["states"] = std::move(states);
  }
  return j;
}

Json to_json(const Route& r) {
  return {{"nodes", r.nodes},           {"edges", r.edges},
          {"edge_times", r.edge_times}, {"total_time", r.total_time},
          {"total_weight", r.total_weight}, {"task_cost", r.task_cost},
          {"within_budget", r.within_budget}, {"cost", r.cost}};
}

Json to_json(const RoutePlan& plan) {
  Json history = Json::array();
  for (const RouteRank& r : plan.best_history) history.push_back({{"tier", r.tier}, {"cost", r.value}});
  return {{"route", to_json(plan.route)},
          {"evaluations", plan.evaluations},
          {"fallback", plan.fallback},
          {"best_history", std::move(history)}};
}

Json to_json(const OracleResult& result) {
  return {{"feasible", result.best.has_value()},
          {"route", result.best ? to_json(*result.best) : Json(nullptr)},
          {"enumerated", result.enumerated}};
}

Json to_json(const MissionReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "mission_report";
  j["success"] = r.success;
  j["reached_destination"] = r.reached_destination;
  j["failure"] = r.failure;
  j["start"] = r.start;
  j["dest"] = r.dest;
  j["budget"] = r.budget;
  j["remaining_time"] = r.remaining_time;
  j["completed_tasks"] = r.completed_tasks;
  j["obtained_weight"] = r.obtained_weight;
  j["reroute_count"] = r.reroute_count;
  const MissionTotals& t = r.totals;
  j["totals"] = {{"route_cost", t.route_cost},     {"final_route_cost", t.final_route_cost},
                 {"path_cost", t.path_cost},       {"path_length", t.path_length},
                 {"violation", t.violation},       {"violations", to_json(t.violations)},
                 {"path_cpu_time", t.path_cpu},    {"route_cpu_time", t.compute_charged},
                 {"flight_time", t.flight_time}};
  Json routes = Json::array();
  for (const Route& route : r.routes) routes.push_back(to_json(route));
  j["routes"] = std::move(routes);
  Json segments = Json::array();
  for (const SegmentRecord& s : r.segments) {
    segments.push_back({{"edge", s.edge},
                        {"from", s.from},
                        {"to", s.to},
                        {"expected_time", s.expected_time},
                        {"actual_time", s.actual_time},
                        {"injected_delay", s.injected_delay},
                        {"clock_start", s.clock_start},
                        {"exceeded", s.exceeded},
                        {"rerouted_after", s.rerouted_after},
                        {"route_index", s.route_index},
                        {"path", to_json(s.path, false)}});
  }
  j["segments"] = std::move(segments);
  return j;
}

Json to_json(const RunRecord& run) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "run";
  j["index"] = run.index;
  j["seed"] = run.seed;
  if (run.report) {
    j["error"] = nullptr;
    j["report"] = to_json(*run.report);
  } else {
    j["error"] = {{"code", run.error_code}, {"message", run.error_message}};
    j["report"] = nullptr;
  }
  return j;
}

Json to_json(const Stats& s) {
  return {{"count", s.count}, {"mean", s.mean},     {"min", s.min}, {"q1", s.q1},
          {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

Json to_json(const Aggregates& a) {
  Json metrics = Json::object();
  for (const auto& [name, stats] : a.metrics) metrics[name] = to_json(stats);
  Json pairs = Json::array();
  for (const auto& [actual, expected] : a.time_pairs) pairs.push_back(Json::array({actual, expected}));
  return {{"completed_runs", a.completed_runs},
          {"successes", a.successes},
          {"metrics", std::move(metrics)},
          {"time_pairs", std::move(pairs)}};
}

Json to_json(const MonteCarloSummary& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "monte_carlo_summary";
  j["runs"] = s.runs;
  j["master_seed"] = s.master_seed;
  j["aggregates"] = to_json(s.aggregates);
  Json runs = Json::array();
  for (const RunRecord& r : s.records) {
    runs.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"success", r.report ? Json(r.report->success) : Json(false)},
                    {"error", r.report ? Json(nullptr) : Json({{"code", r.error_code}, {"message", r.error_message}})}});
  }
  j["run_index"] = std::move(runs);
  return j;
}

// ---------------------------------------------------------------------------
// Parameters

Json to_json(const ScenarioParams& p) {
  return {{"nodes_min", p.nodes_min},
          {"nodes_max", p.nodes_max},
          {"tasks", p.tasks},
          {"vortices", p.vortices},
          {"grid_cols", p.grid_cols},
          {"grid_rows", p.grid_rows},
          {"cell_size", p.cell_size},
          {"z_min", p.z_min},
          {"z_max", p.z_max},
          {"coastal_blobs", p.coastal_blobs},
          {"blob_radius_min", p.blob_radius_min},
          {"blob_radius_max", p.blob_radius_max},
          {"position_sigma", p.position_sigma},
          {"max_edge_length", p.max_edge_length},
          {"nearest_links", p.nearest_links},
          {"max_edge_pitch_deg", p.max_edge_pitch_deg},
          {"obstacles", p.obstacles},
          {"obstacle_radius_min", p.obstacle_radius_min},
          {"obstacle_radius_max", p.obstacle_radius_max},
          {"obstacle_center_sigma", p.obstacle_center_sigma},
          {"obstacle_growth", p.obstacle_growth},
          {"vortex_radius_min", p.vortex_radius_min},
          {"vortex_radius_max", p.vortex_radius_max},
          {"vortex_strength", p.vortex_strength},
          {"cruise_speed", p.cruise_speed},
          {"budget", p.budget},
          {"budget_factor", p.budget_factor ? Json(*p.budget_factor) : Json(nullptr)},
          {"dest_budget_fraction", p.dest_budget_fraction}};
}

namespace {

void read_scenario_params(const Json& j, ScenarioParams& p) {
  maybe(j, "nodes_min", p.nodes_min);
  maybe(j, "nodes_max", p.nodes_max);
  maybe(j, "tasks", p.tasks);
  maybe(j, "vortices", p.vortices);
  maybe(j, "grid_cols", p.grid_cols);
  maybe(j, "grid_rows", p.grid_rows);
  maybe(j, "cell_size", p.cell_size);
  maybe(j, "z_min", p.z_min);
  maybe(j, "z_max", p.z_max);
  maybe(j, "coastal_blobs", p.coastal_blobs);
  maybe(j, "blob_radius_min", p.blob_radius_min);
  maybe(j, "blob_radius_max", p.blob_radius_max);
  maybe(j, "position_sigma", p.position_sigma);
  maybe(j, "max_edge_length", p.max_edge_length);
  maybe(j, "nearest_links", p.nearest_links);
  maybe(j, "max_edge_pitch_deg", p.max_edge_pitch_deg);
  maybe(j, "obstacles", p.obstacles);
  maybe(j, "obstacle_radius_min", p.obstacle_radius_min);
  maybe(j, "obstacle_radius_max", p.obstacle_radius_max);
  maybe(j, "obstacle_center_sigma", p.obstacle_center_sigma);
  maybe(j, "obstacle_growth", p.obstacle_growth);
  maybe(j, "vortex_radius_min", p.vortex_radius_min);
  maybe(j, "vortex_radius_max", p.vortex_radius_max);
  maybe(j, "vortex_strength", p.vortex_strength);
  maybe(j, "cruise_speed", p.cruise_speed);
  maybe(j, "budget", p.budget);
  if (j.contains("budget_factor")) {
    const Json& f = j.at("budget_factor");
    p.budget_factor = f.is_null() ? std::nullopt : std::optional<double>(get<double>(j, "budget_factor"));
  }
  maybe(j, "dest_budget_fraction", p.dest_budget_fraction);
}

void read_mission_config(const Json& j, MissionConfig& c) {
  if (j.contains("firefly")) {
    const Json& f = j.at("firefly");
    maybe(f, "population", c.firefly.population);
    maybe(f, "max_iterations", c.firefly.max_iterations);
    maybe(f, "interior_points", c.firefly.interior_points);
    maybe(f, "attraction", c.firefly.attraction);
    maybe(f, "absorption", c.firefly.absorption);
    maybe(f, "damping", c.firefly.damping);
    maybe(f, "randomness", c.firefly.randomness);
    maybe(f, "box_margin", c.firefly.box_margin);
    maybe(f, "samples", c.firefly.samples);
    maybe(f, "degree", c.firefly.degree);
    maybe(f, "modeled_cpu_seconds", c.firefly.modeled_cpu_seconds);
    maybe(f, "measure_cpu", c.firefly.measure_cpu);
  }
  if (j.contains("evolution")) {
    const Json& e = j.at("evolution");
    maybe(e, "population", c.evolution.population);
    maybe(e, "generations", c.evolution.generations);
    maybe(e, "scale_lo", c.evolution.scale_lo);
    maybe(e, "scale_hi", c.evolution.scale_hi);
    maybe(e, "crossover", c.evolution.crossover);
  }
  if (j.contains("path_weights")) {
    const Json& w = j.at("path_weights");
    maybe(w, "depth_low", c.path_weights.depth_low);
    maybe(w, "depth_high", c.path_weights.depth_high);
    maybe(w, "surge", c.path_weights.surge);
    maybe(w, "sway", c.path_weights.sway);
    maybe(w, "pitch", c.path_weights.pitch);
    maybe(w, "yaw", c.path_weights.yaw);
    maybe(w, "collision", c.path_weights.collision);
    if (w.contains("scale")) {
      c.path_weights.scale = w.at("scale").is_null() ? std::nullopt : std::optional<double>(get<double>(w, "scale"));
    }
    if (w.contains("heading_frame")) {
      const auto frame = get<std::string>(w, "heading_frame");
      if (frame == "ned") {
        c.path_weights.heading_frame = HeadingFrame::kNed;
      } else if (frame == "segment") {
        c.path_weights.heading_frame = HeadingFrame::kSegment;
      } else {
        parse_fail("heading_frame must be `ned` or `segment`");
      }
    }
  }
  if (j.contains("route_weights")) {
    const Json& w = j.at("route_weights");
    maybe(w, "time_fit", c.route_weights.time_fit);
    maybe(w, "task_cost", c.route_weights.task_cost);
    maybe(w, "compute_time", c.route_weights.compute_time);
  }
  if (j.contains("bounds")) {
    const Json& b = j.at("bounds");
    maybe(b, "z_min", c.bounds.z_min);
    maybe(b, "z_max", c.bounds.z_max);
    maybe(b, "u_max", c.bounds.u_max);
    maybe(b, "v_min", c.bounds.v_min);
    maybe(b, "v_max", c.bounds.v_max);
    if (b.contains("pitch_max_deg")) c.bounds.pitch_max = deg_to_rad(get<double>(b, "pitch_max_deg"));
    if (b.contains("yaw_min_deg")) c.bounds.yaw_min = deg_to_rad(get<double>(b, "yaw_min_deg"));
    if (b.contains("yaw_max_deg")) c.bounds.yaw_max = deg_to_rad(get<double>(b, "yaw_max_deg"));
  }
  maybe(j, "time_allowance", c.time_allowance);
  maybe(j, "measure_compute", c.measure_compute);
  if (j.contains("injected_delays")) {
    c.injected_delays.clear();
    for (const auto& [key, value] : j.at("injected_delays").items()) {
      std::size_t segment = 0;
      const auto res = std::from_chars(key.data(), key.data() + key.size(), segment);
      if (res.ec != std::errc() || res.ptr != key.data() + key.size()) {
        parse_fail("injected_delays keys must be segment indices");
      }
      if (!value.is_number()) parse_fail("injected delay must be a number");
      c.injected_delays[segment] = value.get<double>();
    }
  }
}

}  // namespace

Json to_json(const MissionConfig& c) {
  Json delays = Json::object();
  for (const auto& [segment, delay] : c.injected_delays) delays[std::to_string(segment)] = delay;
  const FireflyConfig& f = c.firefly;
  const DifferentialEvolutionConfig& e = c.evolution;
  const CostWeights& w = c.path_weights;
  return {{"firefly",
           {{"population", f.population},
            {"max_iterations", f.max_iterations},
            {"interior_points", f.interior_points},
            {"attraction", f.attraction},
            {"absorption", f.absorption},
            {"damping", f.damping},
            {"randomness", f.randomness},
            {"box_margin", f.box_margin},
            {"samples", f.samples},
            {"degree", f.degree},
            {"modeled_cpu_seconds", f.modeled_cpu_seconds},
            {"measure_cpu", f.measure_cpu}}},
          {"evolution",
           {{"population", e.population},
            {"generations", e.generations},
            {"scale_lo", e.scale_lo},
            {"scale_hi", e.scale_hi},
            {"crossover", e.crossover}}},
          {"path_weights",
           {{"depth_low", w.depth_low},
            {"depth_high", w.depth_high},
            {"surge", w.surge},
            {"sway", w.sway},
            {"pitch", w.pitch},
            {"yaw", w.yaw},
            {"collision", w.collision},
            {"scale", w.scale ? Json(*w.scale) : Json(nullptr)},
            {"heading_frame", w.heading_frame == HeadingFrame::kNed ? "ned" : "segment"}}},
          {"route_weights",
           {{"time_fit", c.route_weights.time_fit},
            {"task_cost", c.route_weights.task_cost},
            {"compute_time", c.route_weights.compute_time}}},
          {"bounds",
           {{"z_min", c.bounds.z_min},
            {"z_max", c.bounds.z_max},
            {"u_max", c.bounds.u_max},
            {"v_min", c.bounds.v_min},
            {"v_max", c.bounds.v_max},
            {"pitch_max_deg", c.bounds.pitch_max * 180.0 / std::numbers::pi},
            {"yaw_min_deg", c.bounds.yaw_min * 180.0 / std::numbers::pi},
            {"yaw_max_deg", c.bounds.yaw_max * 180.0 / std::numbers::pi}}},
          {"time_allowance", c.time_allowance},
          {"measure_compute", c.measure_compute},
          {"injected_delays", std::move(delays)}};
}

Json to_json(const MonteCarloParams& p) {
  return {{"scenario", to_json(p.scenario)}, {"mission", to_json(p.mission)}};
}

MonteCarloParams monte_carlo_params_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("parameter file must hold an object");
  MonteCarloParams p;
  const std::string preset = j.contains("preset") ? get<std::string>(j, "preset") : "full";
  if (preset == "desk") {
    p = desk_monte_carlo_params();
  } else if (preset != "full") {
    parse_fail("preset must be `full` or `desk`");
  }
  if (j.contains("scenario")) read_scenario_params(j.at("scenario"), p.scenario);
  if (j.contains("mission")) read_mission_config(j.at("mission"), p.mission);
  return p;
}

// ---------------------------------------------------------------------------
// Files

Json error_record(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PlanningError(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PlanningError(ErrorCode::kIoError, "cannot write " + path);
  out << content;
  if (!out) throw PlanningError(ErrorCode::kIoError, "failed writing " + path);
}

void save_scenario(const std::string& path, const Scenario& scenario) {
  write_text_file(path, dump(to_json(scenario)));
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(parse_json(read_text_file(path))); }

namespace {

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw PlanningError(ErrorCode::kIoError, "cannot create directory " + dir.string());
}

}  // namespace

void export_report(const MissionReport& report, const Scenario& scenario, const std::string& out_dir) {
  const fs::path dir(out_dir);
  make_dir(dir);
  write_text_file((dir / "report.json").string(), dump(to_json(report)));

  std::string routes = "route,position,node\n";
  for (std::size_t r = 0; r < report.routes.size(); ++r) {
    for (std::size_t q = 0; q < report.routes[r].nodes.size(); ++q) {
      routes += std::to_string(r) + "," + std::to_string(q) + "," + std::to_string(report.routes[r].nodes[q]) + "\n";
    }
  }
  write_text_file((dir / "routes.csv").string(), routes);

  for (std::size_t k = 0; k < report.segments.size(); ++k) {
    const SegmentRecord& seg = report.segments[k];
    std::string path = "sample,x,y,z,yaw,pitch,surge,sway,heave\n";
    for (std::size_t s = 0; s < seg.path.path.states.size(); ++s) {
      const PathState& st = seg.path.path.states[s];
      path += std::to_string(s) + "," + num(st.position.x()) + "," + num(st.position.y()) + "," +
              num(st.position.z()) + "," + num(st.yaw) + "," + num(st.pitch) + "," + num(st.surge) + "," +
              num(st.sway) + "," + num(st.heave) + "\n";
    }
    write_text_file((dir / ("segment_" + padded(k) + "_path.csv")).string(), path);

    std::string history =
        "iteration,best_cost,mean_cost,mean_violation,depth_low,depth_high,surge,sway,pitch,yaw,collision\n";
    for (std::size_t t = 0; t < seg.path.history.size(); ++t) {
      const IterationStats& it = seg.path.history[t];
      const ViolationBreakdown& v = it.mean_violations;
      history += std::to_string(t + 1) + "," + num(it.best_cost) + "," + num(it.mean_cost) + "," +
                 num(it.mean_violation) + "," + num(v.depth_low) + "," + num(v.depth_high) + "," + num(v.surge) +
                 "," + num(v.sway) + "," + num(v.pitch) + "," + num(v.yaw) + "," + num(v.collision) + "\n";
    }
    write_text_file((dir / ("segment_" + padded(k) + "_history.csv")).string(), history);
  }

  if (scenario.terrain) {
    const TerrainMap& map = *scenario.terrain;
    std::string raster = "x,y,u,v,navigable\n";
    for (std::size_t r = 0; r < map.rows(); ++r) {
      for (std::size_t c = 0; c < map.cols(); ++c) {
        const double x = (static_cast<double>(c) + 0.5) * map.cell_size();
        const double y = (static_cast<double>(r) + 0.5) * map.cell_size();
        const Eigen::Vector2d uv = current_uv(scenario.current, x, y);
        raster += num(x) + "," + num(y) + "," + num(uv.x()) + "," + num(uv.y()) + "," +
                  (map.value(c, r) >= kNavigableThreshold ? "1" : "0") + "\n";
      }
    }
    write_text_file((dir / "current.csv").string(), raster);
  }
}

void export_summary(const MonteCarloSummary& summary, const std::string& out_dir) {
  const fs::path dir(out_dir);
  make_dir(dir / "runs");
  write_text_file((dir / "summary.json").string(), dump(to_json(summary)));

  std::string quantiles = "metric,count,mean,min,q1,median,q3,max\n";
  for (const auto& [name, s] : summary.aggregates.metrics) {
    quantiles += name + "," + std::to_string(s.count) + "," + num(s.mean) + "," + num(s.min) + "," + num(s.q1) + "," +
                 num(s.median) + "," + num(s.q3) + "," + num(s.max) + "\n";
  }
  write_text_file((dir / "quantiles.csv").string(), quantiles);

  std::string pairs = "run,segment,actual_time,expected_time\n";
  for (const RunRecord& run : summary.records) {
    if (!run.report) continue;
    for (std::size_t k = 0; k < run.report->segments.size(); ++k) {
      const SegmentRecord& seg = run.report->segments[k];
      pairs += std::to_string(run.index) + "," + std::to_string(k) + "," + num(seg.actual_time) + "," +
               num(seg.expected_time) + "\n";
    }
  }
  write_text_file((dir / "time_pairs.csv").string(), pairs);

  for (const RunRecord& run : summary.records) {
    const std::string stem = "run_" + padded(run.index);
    write_text_file((dir / "runs" / (stem + ".json")).string(), dump(to_json(run)));
    if (run.scenario) save_scenario((dir / "runs" / (stem + "_scenario.json")).string(), *run.scenario);
  }
}

}  // namespace auvplan
