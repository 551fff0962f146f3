#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "auvplan/mission.hpp"
#include "auvplan/scenario.hpp"

namespace auvplan {

struct MonteCarloParams {
  ScenarioParams scenario;
  MissionConfig mission;
};

/// Desk-scale scenario and planner settings.
MonteCarloParams desk_monte_carlo_params();

/// Seeds of run i: the scenario stream uses derive_seed(child, 0) and the
/// mission stream derive_seed(child, 1), where child = derive_seed(master, i).
std::uint64_t run_seed(std::uint64_t master, std::size_t index);

struct RunRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::optional<Scenario> scenario;
  std::optional<MissionReport> report;
  std::string error_code;  // empty when the run completed
  std::string error_message;
};

/// count, mean, min, quartiles (linear interpolation between order
/// statistics) and max.
struct Stats {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  bool operator==(const Stats&) const = default;
};

Stats describe(std::vector<double> values);

struct Aggregates {
  std::size_t completed_runs = 0;
  std::size_t successes = 0;
  std::vector<std::pair<std::string, Stats>> metrics;  // fixed order, see aggregate()
  std::vector<std::pair<double, double>> time_pairs;   // (actual, expected) per flown segment

  const Stats* find(const std::string& name) const;
  bool operator==(const Aggregates&) const = default;
};

/// Reduces the reports of completed runs in index order.
Aggregates aggregate(const std::vector<RunRecord>& runs);

struct MonteCarloSummary {
  std::size_t runs = 0;
  std::uint64_t master_seed = 0;
  std::vector<RunRecord> records;
  Aggregates aggregates;
};

/// Runs are independent and may use several threads; results do not depend
/// on the thread count. Per-run planning errors become failure records.
MonteCarloSummary run_monte_carlo(std::size_t runs, const MonteCarloParams& params, std::uint64_t master_seed,
                                  std::size_t threads = 1);

/// One run of the batch, usable on its own to reproduce a single record.
RunRecord run_single(std::size_t index, const MonteCarloParams& params, std::uint64_t master_seed);

}  // namespace auvplan
