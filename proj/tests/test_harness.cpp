#include <doctest.h>

#include <filesystem>
#include <set>

#include "auvplan/monte_carlo.hpp"
#include "auvplan/oracle.hpp"
#include "auvplan/scenario.hpp"
#include "auvplan/serialization.hpp"
#include "support.hpp"

using namespace auvplan;
using auvplan::test::error_of;
namespace fs = std::filesystem;

namespace {

void check_scenario_invariants(const Scenario& s, const ScenarioParams& p) {
  CHECK(s.graph.size() >= p.nodes_min);
  CHECK(s.graph.size() <= p.nodes_max);
  CHECK(s.tasks().size() == p.tasks);
  CHECK(s.current.vortices.size() == p.vortices);
  CHECK(s.graph.is_connected());
  CHECK(s.start != s.dest);
  CHECK(s.budget > 0.0);
  REQUIRE(s.terrain);
  for (const Waypoint& w : s.graph.waypoints()) {
    CHECK(is_navigable(*s.terrain, w.position.x(), w.position.y()));
  }
  std::set<int> ids;
  for (const Task& t : s.tasks()) CHECK(ids.insert(t.id).second);
  CHECK_NOTHROW(s.validate());
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("auvplan_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("default scenario") {
  const ScenarioParams p;
  Rng rng(derive_seed(1, 0));
  const Scenario s = generate_scenario(p, rng);
  check_scenario_invariants(s, p);
  CHECK(s.budget == 7200.0);
  CHECK(s.tasks().size() == 15);
  const auto fastest = fastest_route(s.graph, s.start, s.dest, s.cruise_speed);
  REQUIRE(fastest);
  CHECK(route_time(*fastest, s.graph, s.cruise_speed) <= 0.5 * s.budget);
}

TEST_CASE("desk scenarios") {
  const ScenarioParams p = desk_params();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, 0));
    const Scenario s = generate_scenario(p, rng);
    check_scenario_invariants(s, p);
    const auto fastest = fastest_route(s.graph, s.start, s.dest, s.cruise_speed);
    REQUIRE(fastest);
    CHECK(s.budget == std::ceil(*p.budget_factor * route_time(*fastest, s.graph, s.cruise_speed)));
  }
}

TEST_CASE("scenario generation is deterministic and round-trips") {
  const ScenarioParams p = desk_params();
  Rng a(5);
  Rng b(5);
  const Scenario s = generate_scenario(p, a);
  const std::string text = dump(to_json(s));
  CHECK(text == dump(to_json(generate_scenario(p, b))));

  const Scenario back = scenario_from_json(parse_json(text));
  CHECK(dump(to_json(back)) == text);
  CHECK(*back.terrain == *s.terrain);

  const fs::path dir = scratch_dir("scenario");
  save_scenario((dir / "s.json").string(), s);
  CHECK(dump(to_json(load_scenario((dir / "s.json").string()))) == text);
}

TEST_CASE("malformed inputs") {
  CHECK(error_of([] { parse_json("{not json"); }) == ErrorCode::kParseError);
  CHECK(error_of([] { scenario_from_json(Json{{"schema_version", 1}}); }) == ErrorCode::kParseError);
  CHECK(error_of([] { read_text_file("/nonexistent/file.json"); }) == ErrorCode::kIoError);
  ScenarioParams p;
  p.nodes_min = 60;
  CHECK(error_of([&] { p.validate(); }) == ErrorCode::kParamsOutOfRange);

  const Json err = error_record("NoRouteExists", "dest unreachable");
  CHECK(err["error"]["code"] == "NoRouteExists");
  CHECK(err["error"]["message"] == "dest unreachable");
}

TEST_CASE("params round-trip through json") {
  MonteCarloParams p = desk_monte_carlo_params();
  p.mission.injected_delays[2] = 15.0;
  p.mission.firefly.population = 17;
  const MonteCarloParams back = monte_carlo_params_from_json(to_json(p));
  CHECK(dump(to_json(back)) == dump(to_json(p)));

  const MonteCarloParams partial = monte_carlo_params_from_json(Json{{"preset", "desk"}, {"scenario", {{"tasks", 3}}}});
  CHECK(partial.scenario.tasks == 3);
  CHECK(partial.scenario.nodes_max == desk_params().nodes_max);
}

TEST_CASE("descriptive statistics") {
  const Stats one = describe({4.0});
  CHECK(one.count == 1);
  CHECK(one.mean == 4.0);
  CHECK(one.min == 4.0);
  CHECK(one.q1 == 4.0);
  CHECK(one.median == 4.0);
  CHECK(one.max == 4.0);
  const Stats s = describe({5, 1, 3, 2, 4});
  CHECK(s.median == 3.0);
  CHECK(s.q1 == 2.0);
  CHECK(s.q3 == 4.0);
  CHECK(s.mean == 3.0);
  CHECK(describe({1, 2}).q1 == doctest::Approx(1.25));
  CHECK(describe({}).count == 0);
}

TEST_CASE("single run batch") {
  const MonteCarloParams p = test::quick_monte_carlo_params();
  const MonteCarloSummary summary = run_monte_carlo(1, p, 77);
  REQUIRE(summary.records.size() == 1);
  const RunRecord& run = summary.records[0];
  REQUIRE(run.report);
  CHECK(run.seed == run_seed(77, 0));
  const Aggregates& a = summary.aggregates;
  CHECK(a.completed_runs == 1);
  CHECK(a.find("obtained_weight")->mean == run.report->obtained_weight);
  CHECK(a.find("obtained_weight")->max == run.report->obtained_weight);
  CHECK(a.find("remaining_time")->median == run.report->remaining_time);
  CHECK(a.find("reroute_count")->min == static_cast<double>(run.report->reroute_count));
  CHECK(a.time_pairs.size() == run.report->segments.size());

  const RunRecord alone = run_single(0, p, 77);
  CHECK(dump(to_json(alone)) == dump(to_json(run)));
}

TEST_CASE("batch is reproducible, thread-count independent and recomputable from files") {
  const MonteCarloParams p = test::quick_monte_carlo_params();
  const MonteCarloSummary a = run_monte_carlo(3, p, 9);
  const MonteCarloSummary b = run_monte_carlo(3, p, 9, 2);
  CHECK(dump(to_json(a)) == dump(to_json(b)));

  // Run i depends only on (master, i).
  const MonteCarloSummary longer = run_monte_carlo(4, p, 9);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(dump(to_json(longer.records[i])) == dump(to_json(a.records[i])));
  }

  const fs::path dir = scratch_dir("batch");
  export_summary(a, dir.string());
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "quantiles.csv"));
  CHECK(fs::exists(dir / "time_pairs.csv"));
  std::vector<double> weights;
  std::vector<double> remaining;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string stem = "run_00" + std::to_string(i);
    REQUIRE(fs::exists(dir / "runs" / (stem + "_scenario.json")));
    const Json run = parse_json(read_text_file((dir / "runs" / (stem + ".json")).string()));
    REQUIRE(run["report"].is_object());
    weights.push_back(run["report"]["obtained_weight"].get<double>());
    remaining.push_back(run["report"]["remaining_time"].get<double>());
  }
  CHECK(describe(weights) == *a.aggregates.find("obtained_weight"));
  CHECK(describe(remaining) == *a.aggregates.find("remaining_time"));
}

TEST_CASE("failed runs become error records") {
  MonteCarloParams p = test::quick_monte_carlo_params();
  p.scenario.grid_cols = 3;
  p.scenario.grid_rows = 3;
  const MonteCarloSummary s = run_monte_carlo(1, p, 1);
  REQUIRE(s.records.size() == 1);
  CHECK_FALSE(s.records[0].report);
  CHECK_FALSE(s.records[0].error_code.empty());
  CHECK(s.aggregates.completed_runs == 0);
}

TEST_CASE("mission report export") {
  const MonteCarloParams p = test::quick_monte_carlo_params();
  const RunRecord run = run_single(0, p, 3);
  REQUIRE(run.report);
  const fs::path dir = scratch_dir("report");
  export_report(*run.report, *run.scenario, dir.string());
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "routes.csv"));
  CHECK(fs::exists(dir / "current.csv"));
  for (std::size_t k = 0; k < run.report->segments.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "segment_%03zu_path.csv", k);
    CHECK(fs::exists(dir / name));
  }
}
