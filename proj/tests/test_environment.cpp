#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "auvplan/environment.hpp"
#include "auvplan/rng.hpp"
#include "support.hpp"

using namespace auvplan;
using auvplan::test::error_of;
using auvplan::test::wp;

TEST_CASE("seed derivation matches frozen splitmix64 values") {
  // Reference values computed with an independent Python implementation.
  CHECK(splitmix64(0) == 16294208416658607535ULL);
  CHECK(splitmix64(1) == 10451216379200822465ULL);
  CHECK(splitmix64(12345) == 2454886589211414944ULL);
  CHECK(derive_seed(0, 0) == 7960286522194355700ULL);
  CHECK(derive_seed(42, 0) == 2949826092126892291ULL);
  CHECK(derive_seed(42, 1) == 5139283748462763858ULL);
  CHECK(derive_seed(2024, 19) == 9252891244966346608ULL);
}

TEST_CASE("rng engine is the standard mt19937_64") {
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("rng index and uniform stay in range") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    CHECK(rng.index(7) < 7);
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sample_tasks") {
  Rng rng(11);
  CHECK(sample_tasks(15, rng).size() == 15);
  CHECK(sample_tasks(0, rng).empty());

  Rng a(99);
  Rng b(99);
  const auto tasks = sample_tasks(1000, a);
  const auto again = sample_tasks(1000, b);
  REQUIRE(tasks.size() == 1000);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    CHECK(t.id == static_cast<int>(i) + 1);
    CHECK(t.priority >= kTaskPriorityMin);
    CHECK(t.priority <= kTaskPriorityMax);
    CHECK(t.risk >= kTaskRiskMin);
    CHECK(t.risk <= kTaskRiskMax);
    CHECK(t.duration >= kTaskDurationMin);
    CHECK(t.duration <= kTaskDurationMax);
    CHECK(t.priority == again[i].priority);
    CHECK(t.risk == again[i].risk);
    CHECK(t.duration == again[i].duration);
  }
}

TEST_CASE("build_graph derives weight, distance and time") {
  std::vector<Waypoint> w{wp(0, 0, 0), wp(1, 3, 4)};
  SUBCASE("task edge") {
    std::vector<EdgeSpec> e{{0, 1, test::task(1, 10, 2, 20)}};
    const MissionGraph g = build_graph(w, e, 2.0);
    CHECK(g.edge(0).distance == doctest::Approx(5.0));
    CHECK(g.edge(0).weight == doctest::Approx(5.0));
    CHECK(g.edge(0).nominal_time == doctest::Approx(22.5));
  }
  SUBCASE("plain edge") {
    std::vector<EdgeSpec> e{{0, 1, std::nullopt}};
    const MissionGraph g = build_graph(w, e, 2.0);
    CHECK(g.edge(0).weight == 1.0);
    CHECK(g.edge(0).nominal_time == doctest::Approx(2.5));
  }
  SUBCASE("coincident endpoints") {
    std::vector<Waypoint> same{wp(0, 1, 1), wp(1, 1, 1)};
    std::vector<EdgeSpec> e{{0, 1, std::nullopt}};
    CHECK(error_of([&] { build_graph(same, e, 2.0); }) == ErrorCode::kSelfLoop);
    std::vector<EdgeSpec> loop{{0, 0, std::nullopt}};
    CHECK(error_of([&] { build_graph(w, loop, 2.0); }) == ErrorCode::kSelfLoop);
  }
  SUBCASE("malformed inputs") {
    std::vector<EdgeSpec> dup{{0, 1, std::nullopt}, {1, 0, std::nullopt}};
    CHECK(error_of([&] { build_graph(w, dup, 2.0); }) == ErrorCode::kDuplicateEdge);
    std::vector<EdgeSpec> unknown{{0, 5, std::nullopt}};
    CHECK(error_of([&] { build_graph(w, unknown, 2.0); }) == ErrorCode::kUnknownWaypoint);
    std::vector<Waypoint> three{wp(0, 0, 0), wp(1, 3, 4), wp(2, 9, 9)};
    std::vector<EdgeSpec> partial{{0, 1, std::nullopt}};
    CHECK(error_of([&] { build_graph(three, partial, 2.0); }) == ErrorCode::kDisconnectedGraph);
    std::vector<EdgeSpec> same_task{{0, 1, test::task(1, 5, 5, 20)}, {1, 2, test::task(1, 5, 5, 20)}};
    CHECK(error_of([&] { build_graph(three, same_task, 2.0); }) == ErrorCode::kDuplicateTaskAssignment);
  }
}

TEST_CASE("graph adjacency is symmetric and removal deactivates") {
  MissionGraph g = test::diamond();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(g.adjacent(i, j) == g.adjacent(j, i));
  }
  CHECK(g.neighbors(0) == std::vector<int>{1, 2});
  g.remove_edge(*g.edge_between(0, 1));
  CHECK_FALSE(g.adjacent(1, 0));
  CHECK(g.active_edge_count() == 3);
  CHECK(g.connected(0, 3));
  g.remove_edge(*g.edge_between(0, 2));
  CHECK_FALSE(g.connected(0, 3));
  CHECK(g.edges().size() == 4);
}

TEST_CASE("Lamb vortex closed form") {
  CurrentField f;
  f.vortices.push_back({{0.0, 0.0}, 1.0, 2.0 * std::numbers::pi});
  const CurrentSample s = current_velocity(f, 0.0, 1.0);
  CHECK(s.u == doctest::Approx(-(1.0 - std::exp(-1.0))).epsilon(1e-12));
  CHECK(std::abs(s.v) < 1e-15);
  CHECK(s.elevation == 0.0);
  CHECK(s.magnitude() == doctest::Approx(1.0 - std::exp(-1.0)));

  const CurrentSample c = current_velocity(f, 0.0, 0.0);
  CHECK(c.u == 0.0);
  CHECK(c.v == 0.0);
}

TEST_CASE("vortex far field decays below the point-vortex bound") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    Vortex v{{rng.uniform(-500, 500), rng.uniform(-500, 500)}, rng.uniform(1, 300), rng.uniform(-50, 50)};
    CurrentField f{{v}};
    const double angle = rng.uniform(0, 2 * std::numbers::pi);
    const double r = 100.0 * v.radius;
    const auto s = current_velocity(f, v.center.x() + r * std::cos(angle), v.center.y() + r * std::sin(angle));
    CHECK(s.magnitude() < std::abs(v.strength) / (2 * std::numbers::pi * r * r) * r * 1.01);
  }
}

TEST_CASE("current field properties") {
  Rng rng(17);
  CurrentField field;
  for (int k = 0; k < 6; ++k) {
    field.vortices.push_back({{rng.uniform(0, 1000), rng.uniform(0, 1000)}, rng.uniform(50, 300), rng.uniform(-500, 500)});
  }
  for (int p = 0; p < 300; ++p) {
    const double x = rng.uniform(-200, 1200);
    const double y = rng.uniform(-200, 1200);
    // Superposition: the field is the exact sum of its vortices.
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (const Vortex& v : field.vortices) sum += current_uv(CurrentField{{v}}, x, y);
    const Eigen::Vector2d total = current_uv(field, x, y);
    CHECK((total - sum).norm() <= 1e-12 * (1.0 + sum.norm()));

    // Divergence-free, by central differences.
    const double h = 1e-3;
    const double dudx = (current_uv(field, x + h, y).x() - current_uv(field, x - h, y).x()) / (2 * h);
    const double dvdy = (current_uv(field, x, y + h).y() - current_uv(field, x, y - h).y()) / (2 * h);
    const double dudy = (current_uv(field, x, y + h).x() - current_uv(field, x, y - h).x()) / (2 * h);
    const double dvdx = (current_uv(field, x + h, y).y() - current_uv(field, x - h, y).y()) / (2 * h);
    const double scale = std::abs(dudx) + std::abs(dvdy) + std::abs(dudy) + std::abs(dvdx);
    CHECK(std::abs(dudx + dvdy) <= 1e-4 * scale + 1e-12);
  }
  // A single vortex is antisymmetric about its center.
  const Vortex& v = field.vortices.front();
  const CurrentField one{{v}};
  const Eigen::Vector2d a = current_uv(one, v.center.x() + 37.0, v.center.y() - 12.0);
  const Eigen::Vector2d b = current_uv(one, v.center.x() - 37.0, v.center.y() + 12.0);
  CHECK((a + b).norm() < 1e-12);
}

TEST_CASE("obstacle realization") {
  Rng rng(8);
  const Obstacle obs = place_obstacle(wp(0, 0, 0), wp(1, 100, 50), 15.0, 20.0, 0.0, rng);
  CHECK(obs.box_min.x() == 0.0);
  CHECK(obs.box_max.y() == 50.0);
  CHECK(obs.center.x() >= 0.0);
  CHECK(obs.center.x() <= 100.0);
  for (int k = 0; k < 100000; ++k) {
    const Disc d = realize_obstacle(obs, 0.0, rng);
    CHECK(d.center.x() >= obs.box_min.x());
    CHECK(d.center.x() <= obs.box_max.x());
    CHECK(d.center.y() >= obs.box_min.y());
    CHECK(d.center.y() <= obs.box_max.y());
    if (d.radius != 20.0) FAIL("radius changed without growth");
  }

  Obstacle growing = obs;
  growing.growth_rate = 0.5;
  Rng r1(4);
  CHECK(realize_obstacle(growing, 10.0, r1).radius == doctest::Approx(25.0));

  Rng r2(4);
  Rng r3(4);
  const Disc d2 = realize_obstacle(obs, 3.0, r2);
  const Disc d3 = realize_obstacle(obs, 3.0, r3);
  CHECK(d2.center == d3.center);
  CHECK(d2.radius == d3.radius);

  Rng r4(4);
  const Disc still = realize_obstacle(obs, 0.0, r4, 0.0);
  CHECK(still.center == obs.center);
  CHECK(still.radius == 20.0);
}

TEST_CASE("terrain classification and navigability") {
  const TerrainMap all_ones = classify_grid({{1.0, 1.0}, {1.0, 1.0}}, 0.5);
  for (double v : all_ones.values()) CHECK(v == 1.0);
  const TerrainMap all_zero = classify_grid({{0.0, 0.0}}, 0.5);
  for (double v : all_zero.values()) CHECK(v == 0.0);
  const TerrainMap mixed = classify_grid({{0.9, 0.4}}, 0.5);
  CHECK(mixed.value(0, 0) == 1.0);
  CHECK(mixed.value(1, 0) == doctest::Approx(0.29));
  CHECK(mixed.value(1, 0) < 0.3);

  TerrainMap map = TerrainMap::filled(4, 4, 10.0, 1.0);
  map.set_value(2, 1, 0.2);
  CHECK(is_navigable(map, 5.0, 5.0));
  CHECK_FALSE(is_navigable(map, 25.0, 15.0));
  CHECK_FALSE(is_navigable(map, -1.0, 5.0));
  CHECK_FALSE(is_navigable(map, 5.0, 40.5));
  CHECK(is_navigable(map, 40.0, 40.0));  // far boundary belongs to the last cell

  CHECK(error_of([] { TerrainMap::filled(0, 3, 1.0, 1.0); }) == ErrorCode::kEmptyGrid);
}

TEST_CASE("ascii grid round trip") {
  TerrainMap map = TerrainMap::filled(3, 2, 35.0, 1.0);
  map.set_value(1, 1, 0.125);
  std::stringstream ss;
  write_ascii_grid(ss, map);
  CHECK(read_ascii_grid(ss) == map);

  std::stringstream bad("2 2 10\n1 1 1\n");
  CHECK(error_of([&] { read_ascii_grid(bad); }) == ErrorCode::kParseError);
}

TEST_CASE("sample_waypoints") {
  Rng rng(21);
  const TerrainMap water = TerrainMap::filled(10, 10, 35.0, 1.0);
  const auto pts = sample_waypoints(water, 30, rng);
  REQUIRE(pts.size() == 30);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].id == static_cast<int>(i));
    CHECK(is_navigable(water, pts[i].position.x(), pts[i].position.y()));
    CHECK(pts[i].position.z() >= water.z_min());
    CHECK(pts[i].position.z() <= water.z_max());
  }

  TerrainMap single = TerrainMap::filled(10, 10, 35.0, 0.1);
  single.set_value(3, 7, 1.0);
  for (const Waypoint& w : sample_waypoints(single, 5, rng)) {
    CHECK(w.position.x() >= 105.0);
    CHECK(w.position.x() <= 140.0);
    CHECK(w.position.y() >= 245.0);
    CHECK(w.position.y() <= 280.0);
  }

  const TerrainMap coast = TerrainMap::filled(5, 5, 35.0, 0.2);
  CHECK(error_of([&] { sample_waypoints(coast, 3, rng); }) == ErrorCode::kNoNavigableArea);
}
