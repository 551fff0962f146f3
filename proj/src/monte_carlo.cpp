#include "auvplan/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "auvplan/error.hpp"

namespace auvplan {

MonteCarloParams desk_monte_carlo_params() {
  return {desk_params(), desk_mission_config()};
}

std::uint64_t run_seed(std::uint64_t master, std::size_t index) { return derive_seed(master, index); }

Stats describe(std::vector<double> values) {
  Stats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.min = values.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = values.back();
  return s;
}

const Stats* Aggregates::find(const std::string& name) const {
  for (const auto& [key, stats] : metrics) {
    if (key == name) return &stats;
  }
  return nullptr;
}

Aggregates aggregate(const std::vector<RunRecord>& runs) {
  Aggregates a;
  std::vector<double> weight, tasks, route_cost, path_cost, violation, path_cpu, compute, remaining, reroutes,
      flight, actual, expected;
  for (const RunRecord& run : runs) {
    if (!run.report) continue;
    const MissionReport& r = *run.report;
    ++a.completed_runs;
    if (r.success) ++a.successes;
    weight.push_back(r.obtained_weight);
    tasks.push_back(static_cast<double>(r.completed_tasks));
    route_cost.push_back(r.totals.route_cost);
    path_cost.push_back(r.totals.path_cost);
    violation.push_back(r.totals.violation);
    path_cpu.push_back(r.totals.path_cpu);
    compute.push_back(r.totals.compute_charged);
    remaining.push_back(r.remaining_time);
    reroutes.push_back(static_cast<double>(r.reroute_count));
    flight.push_back(r.totals.flight_time);
    for (const SegmentRecord& seg : r.segments) {
      actual.push_back(seg.actual_time);
      expected.push_back(seg.expected_time);
      a.time_pairs.emplace_back(seg.actual_time, seg.expected_time);
    }
  }
  a.metrics = {
      {"obtained_weight", describe(weight)},   {"completed_tasks", describe(tasks)},
      {"route_cost", describe(route_cost)},    {"path_cost", describe(path_cost)},
      {"total_violation", describe(violation)}, {"path_cpu_time", describe(path_cpu)},
      {"route_cpu_time", describe(compute)},   {"remaining_time", describe(remaining)},
      {"reroute_count", describe(reroutes)},   {"flight_time", describe(flight)},
      {"segment_actual_time", describe(actual)}, {"segment_expected_time", describe(expected)},
  };
  return a;
}

RunRecord run_single(std::size_t index, const MonteCarloParams& params, std::uint64_t master_seed) {
  RunRecord rec;
  rec.index = index;
  rec.seed = run_seed(master_seed, index);
  try {
    Rng scenario_rng(derive_seed(rec.seed, 0));
    Scenario scenario = generate_scenario(params.scenario, scenario_rng);
    scenario.seed = rec.seed;
    rec.scenario = scenario;
    Rng mission_rng(derive_seed(rec.seed, 1));
    rec.report = run_mission(*rec.scenario, params.mission, mission_rng);
  } catch (const PlanningError& e) {
    rec.error_code = std::string(to_string(e.code()));
    rec.error_message = e.what();
  }
  return rec;
}

MonteCarloSummary run_monte_carlo(std::size_t runs, const MonteCarloParams& params, std::uint64_t master_seed,
                                  std::size_t threads) {
  if (runs == 0) throw PlanningError(ErrorCode::kInvalidArgument, "need at least one run");
  params.scenario.validate();
  params.mission.validate();
  MonteCarloSummary summary;
  summary.runs = runs;
  summary.master_seed = master_seed;
  summary.records.resize(runs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) summary.records[i] = run_single(i, params, master_seed);
  };
  const std::size_t pool = std::clamp<std::size_t>(threads, 1, runs);
  std::vector<std::thread> workers;
  for (std::size_t t = 1; t < pool; ++t) workers.emplace_back(worker);
  worker();
  for (std::thread& w : workers) w.join();

  summary.aggregates = aggregate(summary.records);
  return summary;
}

}  // namespace auvplan
