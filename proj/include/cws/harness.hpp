#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cws/cluster.hpp"
#include "cws/trace.hpp"

namespace cws {

struct SweepRequest {
  std::vector<WorkflowTrace> traces;
  std::vector<std::string> strategies;
  int repetitions = 5;
  std::uint64_t base_seed = 0;  // run seed = base_seed + repetition
  ClusterConfig cluster;
  std::size_t batch_size = 0;  // 0 = unlimited
  /// Directory for records.jsonl and per-run decision logs (under logs/).
  /// Empty: nothing is written, results are returned only.
  std::string out_dir;
};

/// One completed (trace, strategy, repetition) run.
struct RunRecord {
  std::string trace;
  std::string strategy;
  std::uint64_t seed = 0;
  int repetition = 0;
  std::int64_t makespan_ms = 0;
  std::size_t task_count = 0;
  /// Path of the decision log relative to out_dir ("" when not written).
  std::string decisions_log;
  /// The run's decision log (JSON Lines), kept in memory for cross-checks.
  /// Not part of the serialized record.
  std::string log_text;

  std::string to_json_line() const;
};

/// The per-(trace, strategy) comparison row.
struct StrategyAggregate {
  std::string trace;
  std::string strategy;
  std::int64_t median_makespan_ms = 0;  // lower middle for even counts
  std::int64_t min_makespan_ms = 0;
  double stddev_ms = 0.0;  // population standard deviation
  double median_change_vs_baseline_pct = 0.0;
  double better_than_baseline_median_pct = 0.0;
  double better_than_baseline_min_pct = 0.0;
};

/// Runs every (trace, strategy, repetition) tuple on an isolated in-process
/// scheduler + simulated cluster, in deterministic order. Writes
/// records.jsonl plus one decision log per run when out_dir is set.
std::vector<RunRecord> sweep(const SweepRequest& request);

/// Collapses records into per-(trace, strategy) aggregates, comparing each
/// strategy against the trace's baseline_default runs. Throws
/// MissingBaseline when a trace has no baseline runs.
std::vector<StrategyAggregate> aggregate(const std::vector<RunRecord>& records);

std::string records_to_jsonl(const std::vector<RunRecord>& records);
std::string aggregates_to_csv(const std::vector<StrategyAggregate>& aggregates);
std::string aggregates_to_json(const std::vector<StrategyAggregate>& aggregates);
std::vector<StrategyAggregate> aggregates_from_json(const std::string& text);
std::string aggregates_to_markdown(
    const std::vector<StrategyAggregate>& aggregates);

}  // namespace cws
