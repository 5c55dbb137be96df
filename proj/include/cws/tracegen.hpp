#pragma once

#include <cstdint>
#include <string>

#include "cws/cluster.hpp"
#include "cws/rng.hpp"
#include "cws/trace.hpp"

namespace cws {

/// Six-task diamond workflow over a five-vertex abstract DAG. The middle
/// join task is revealed only once both of its predecessors finish, so the
/// trace exercises the dynamic-reveal loop end to end.
WorkflowTrace diamond_trace();

/// Two identical single-slot nodes (1 cpu each), zero startup overhead —
/// the companion cluster for diamond_trace.
ClusterConfig two_slot_cluster();

/// Straight chain of `length` tasks, one abstract vertex per stage.
WorkflowTrace chain_trace(std::size_t length, std::int64_t runtime_ms = 1000);

/// One splitter, `width` parallel tasks, one join.
WorkflowTrace fork_join_trace(std::size_t width, std::int64_t runtime_ms = 1000);

struct LayeredTraceParams {
  std::size_t min_tasks = 5;
  std::size_t max_tasks = 200;
  std::size_t max_layers = 8;
  double max_cpus = 2.0;
  std::int64_t min_memory_bytes = 64LL * 1024 * 1024;
  std::int64_t max_memory_bytes = 2LL * 1024 * 1024 * 1024;
  std::int64_t max_runtime_ms = 5000;
};

/// Random layered workflow: tasks in layer k depend on a random subset of
/// layer k-1 (and occasionally deeper layers). Resource requests stay
/// within the params' caps, so every task fits the fuzz cluster.
WorkflowTrace layered_random_trace(Rng& rng, const LayeredTraceParams& params,
                                   const std::string& name);

/// Four heterogeneous nodes (mixed capacity and speed) sized so any task
/// produced by layered_random_trace with default params fits somewhere.
ClusterConfig fuzz_cluster();

struct CriticalPathParams {
  std::size_t min_width = 4;
  std::size_t max_width = 9;
  std::size_t min_chain = 4;
  std::size_t max_chain = 9;
  std::int64_t wide_runtime_lo_ms = 500;
  std::int64_t wide_runtime_hi_ms = 3000;
  std::int64_t chain_runtime_lo_ms = 2000;
  std::int64_t chain_runtime_hi_ms = 6000;
};

/// Wide fan-out of short independent tasks plus one long dependent chain
/// hanging off the same root. The wide tasks come first in trace order, so
/// submission-order scheduling delays the chain while rank-aware
/// scheduling starts it immediately.
WorkflowTrace critical_path_trace(Rng& rng, const CriticalPathParams& params,
                                  const std::string& name);

/// Two identical single-slot nodes — scarce enough that prioritization
/// decides the makespan of a critical_path_trace.
ClusterConfig narrow_cluster();

}  // namespace cws
