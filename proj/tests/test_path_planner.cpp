#include <doctest.h>

#include <cmath>

#include "auvplan/path_planner.hpp"
#include "support.hpp"

using namespace auvplan;
using auvplan::test::error_of;
using auvplan::test::wp;

namespace {

FireflyConfig small_config() {
  FireflyConfig cfg;
  cfg.population = 20;
  cfg.max_iterations = 25;
  return cfg;
}

ControlPolygon line(Eigen::Vector3d a, Eigen::Vector3d b) {
  ControlPolygon c;
  c.points = {a, b};
  return c;
}

}  // namespace

TEST_CASE("attraction") {
  CHECK(attraction(0.0, 2.0, 1.0) == 2.0);
  CHECK(attraction(1.0, 2.0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(attraction(37.0, 2.0, 0.0) == 2.0);
}

TEST_CASE("brightness decreases with cost") {
  CHECK(brightness(0.0) > brightness(1.0));
  CHECK(brightness(1.0) > brightness(1e6));
}

TEST_CASE("firefly_move") {
  Rng rng(1);
  Eigen::VectorXd xi(2);
  Eigen::VectorXd xj(2);
  xi << 0.0, 0.0;
  xj << 1.0, 0.0;

  FireflyConfig cfg;
  cfg.randomness = 0.0;
  cfg.absorption = 0.0;
  cfg.attraction = 1.0;
  Eigen::VectorXd a(2);
  a << 0.3, 0.9;
  Eigen::VectorXd b(2);
  b << 0.6, 0.2;
  CHECK(firefly_move(a, b, 1, cfg, rng) == b);

  cfg.attraction = 2.0;
  cfg.absorption = 1.0;
  const Eigen::VectorXd moved = firefly_move(xi, xj, 1, cfg, rng);
  CHECK(moved[0] == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(moved[1] == 0.0);

  // Large noise never leaves the unit box.
  cfg.randomness = 5.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd m = firefly_move(a, b, 1, cfg, rng);
    CHECK(m.minCoeff() >= 0.0);
    CHECK(m.maxCoeff() <= 1.0);
  }
}

TEST_CASE("randomness decays geometrically") {
  FireflyConfig cfg;
  cfg.randomness = 0.4;
  cfg.damping = 0.95;
  CHECK(randomness_at(cfg, 10) == doctest::Approx(0.4 * std::pow(0.95, 10)));
  CHECK(randomness_at(cfg, 10) == doctest::Approx(0.2395).epsilon(1e-3));
  CHECK(randomness_at(cfg, 0) == doctest::Approx(0.4));
}

TEST_CASE("evaluate_path") {
  Rng rng(3);
  const VehicleBounds bounds;
  CostWeights w;
  w.scale = 1000.0;

  SUBCASE("feasible path costs its length") {
    const PathEvaluation e = evaluate_path(line({0, 0, 10}, {100, 0, 10}), {}, bounds, w, 0.0, rng);
    CHECK(e.violations == ViolationBreakdown{});
    CHECK(e.cost == doctest::Approx(100.0));
    CHECK(e.cost == e.length);
  }
  SUBCASE("one state below the depth limit") {
    const PathEvaluation e = evaluate_path(line({0, 0, 100}, {1000, 0, 110}), {}, bounds, w, 0.0, rng, 2);
    CHECK(e.violations.depth_high == doctest::Approx(10.0));
    CHECK(e.violations.pitch == 0.0);
    CHECK(e.cost == doctest::Approx(e.length + 10.0 * 1000.0));
  }
  SUBCASE("crossing an obstacle") {
    Environment env;
    Rng place(1);
    env.obstacles.push_back(place_obstacle(wp(0, 50, 0), wp(1, 50, 0), 0.0, 10.0, 0.0, place));
    const PathEvaluation e = evaluate_path(line({0, 0, 10}, {100, 0, 10}), env, bounds, w, 0.0, rng);
    CHECK(e.violations.collision == 1.0);
    CHECK(e.cost == doctest::Approx(e.length + 1000.0));
  }
  SUBCASE("crossing land") {
    Environment env;
    TerrainMap map = TerrainMap::filled(10, 10, 20.0, 1.0);
    map.set_value(2, 0, 0.1);
    env.terrain = map;
    const PathEvaluation e = evaluate_path(line({5, 5, 10}, {95, 5, 10}), env, bounds, w, 0.0, rng);
    CHECK(e.violations.collision == 1.0);
  }
  SUBCASE("default scale is proportional to the chord") {
    CostWeights d;
    const PathEvaluation e = evaluate_path(line({0, 0, 100}, {1000, 0, 110}), {}, bounds, d, 0.0, rng, 2);
    CHECK(e.cost == doctest::Approx(e.length + 10.0 * 1e3 * e.length));
  }
}

TEST_CASE("plan_path is deterministic and keeps the best ever") {
  const Waypoint a = wp(0, 0, 0, 20);
  const Waypoint b = wp(1, 400, 150, 30);
  const FireflyConfig cfg = small_config();
  Rng r1(42);
  Rng r2(42);
  const PlannedPath p1 = plan_path(a, b, {}, VehicleBounds{}, CostWeights{}, cfg, 0.0, r1);
  const PlannedPath p2 = plan_path(a, b, {}, VehicleBounds{}, CostWeights{}, cfg, 0.0, r2);
  CHECK(p1.cost == p2.cost);
  CHECK(p1.length == p2.length);
  REQUIRE(p1.path.control.points.size() == p2.path.control.points.size());
  for (std::size_t i = 0; i < p1.path.control.points.size(); ++i) {
    CHECK(p1.path.control.points[i] == p2.path.control.points[i]);
  }

  REQUIRE(p1.history.size() == cfg.max_iterations);
  for (std::size_t t = 1; t < p1.history.size(); ++t) {
    CHECK(p1.history[t].best_cost <= p1.history[t - 1].best_cost);
  }
  CHECK(p1.history.back().best_cost == p1.cost);
  CHECK(p1.cpu_time == cfg.modeled_cpu_seconds);
  CHECK(p1.path.control.points.size() == cfg.interior_points + 2);
  CHECK(p1.path.control.points.front() == a.position);
  CHECK(p1.path.control.points.back() == b.position);

  const SearchBox box = SearchBox::around(a.position, b.position, cfg.box_margin, {});
  for (const Eigen::Vector3d& p : p1.path.control.points) {
    CHECK((p.array() >= box.lo.array() - 1e-9).all());
    CHECK((p.array() <= box.hi.array() + 1e-9).all());
  }
}

TEST_CASE("search box is clipped to the terrain") {
  Environment env;
  env.terrain = TerrainMap::filled(10, 10, 10.0, 1.0);
  const SearchBox box = SearchBox::around({5, 5, 10}, {95, 95, 90}, 0.25, env);
  CHECK(box.lo.x() >= 0.0);
  CHECK(box.hi.x() <= 100.0);
  CHECK(box.lo.z() >= 0.0);
  CHECK(box.hi.z() <= 100.0);
}

TEST_CASE("plan_path routes around a blocking obstacle") {
  Environment env;
  Rng place(1);
  env.obstacles.push_back(place_obstacle(wp(0, 150, 0), wp(1, 150, 0), 0.0, 20.0, 0.0, place));
  const FireflyConfig cfg;
  Rng rng(9);
  const PlannedPath p = plan_path(wp(0, 0, 0, 20), wp(1, 300, 0, 20), env, VehicleBounds{}, CostWeights{}, cfg, 0.0, rng);
  CHECK(p.violations.collision == 0.0);
  CHECK(p.length > 300.0);
}

TEST_CASE("plan_path rejects bad inputs") {
  Rng rng(1);
  FireflyConfig cfg = small_config();
  CHECK(error_of([&] { plan_path(wp(0, 1, 1), wp(1, 1, 1), {}, VehicleBounds{}, CostWeights{}, cfg, 0.0, rng); }) ==
        ErrorCode::kInvalidArgument);
  cfg.damping = 1.0;
  CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("planner scoring agrees exactly with evaluate_path") {
  Rng field_rng(12);
  Environment env;
  for (int k = 0; k < 4; ++k) {
    env.current.vortices.push_back(
        {{field_rng.uniform(0, 600), field_rng.uniform(-300, 300)}, field_rng.uniform(50, 200), field_rng.uniform(-400, 400)});
  }
  for (HeadingFrame frame : {HeadingFrame::kNed, HeadingFrame::kSegment}) {
    CostWeights w;
    w.heading_frame = frame;
    const FireflyConfig cfg = small_config();
    Rng rng(31);
    const PlannedPath p = plan_path(wp(0, 0, 0, 20), wp(1, 500, -250, 60), env, VehicleBounds{}, w, cfg, 0.0, rng);
    const PathEvaluation e = evaluate_path(p.path.control, env, VehicleBounds{}, w, 0.0, rng, cfg.samples, cfg.degree);
    CHECK(e.cost == p.cost);
    CHECK(e.violations == p.violations);
    CHECK(e.length == p.length);
  }
}

TEST_CASE("asymmetric yaw and sway limits") {
  VehicleBounds b;
  b.yaw_min = deg_to_rad(-10.0);
  b.yaw_max = deg_to_rad(30.0);
  b.v_min = -0.1;
  b.v_max = 1.0;
  CostWeights w;
  w.scale = 1.0;
  Rng rng(1);
  const double a = deg_to_rad(20.0);
  ControlPolygon up;
  up.points = {{0, 0, 10}, {100 * std::cos(a), 100 * std::sin(a), 10}};
  const PathEvaluation e = evaluate_path(up, {}, b, w, 0.0, rng, 10);
  CHECK(e.violations.yaw == 0.0);
  CHECK(e.violations.sway == 0.0);  // sway 2 sin(20 deg) = 0.68 < 1

  ControlPolygon down;
  down.points = {{0, 0, 10}, {100 * std::cos(a), -100 * std::sin(a), 10}};
  const PathEvaluation f = evaluate_path(down, {}, b, w, 0.0, rng, 10);
  CHECK(f.violations.yaw == doctest::Approx(10 * deg_to_rad(10.0)));
  CHECK(f.violations.sway == doctest::Approx(10 * (2 * std::sin(a) - 0.1)));
}
