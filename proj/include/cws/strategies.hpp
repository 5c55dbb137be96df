#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cws/dag.hpp"
#include "cws/rng.hpp"
#include "cws/task.hpp"

namespace cws {

enum class Prioritization {
  Fifo,
  Random,
  SizeDesc,
  SizeAsc,
  RankFifo,
  RankMin,
  RankMax,
};

enum class Assignment {
  RoundRobin,
  Random,
  Fair,
};

/// A composite scheduling strategy: one prioritization plus one node
/// assignment, or the special baseline emulation. Exactly 7 x 3 = 21
/// composites plus "baseline_default" parse; anything else is rejected.
struct StrategyName {
  bool baseline = false;
  Prioritization prioritization = Prioritization::Fifo;
  Assignment assignment = Assignment::RoundRobin;

  /// Parses the lowercase wire form, e.g. "rank_min-round_robin",
  /// "size_desc-fair", "baseline_default". Throws Errc::UnknownStrategy.
  static StrategyName parse(const std::string& text);

  /// Canonical wire form (lowercase `<prioritization>-<assignment>`).
  std::string to_string() const;

  /// All 22 canonical names: the 21 composites in a fixed order, then
  /// "baseline_default".
  static std::vector<std::string> all_names();

  bool operator==(const StrategyName&) const = default;
};

const char* prioritization_name(Prioritization p);
const char* assignment_name(Assignment a);

/// Rank of every vertex: the number of edges on the longest path from the
/// vertex to any sink. Keyed to the DAG version it was computed from.
struct RankTable {
  std::map<VertexId, std::int64_t> ranks;
  std::uint64_t dag_version = 0;

  std::int64_t rank_of(const VertexId& id) const {
    auto it = ranks.find(id);
    return it == ranks.end() ? 0 : it->second;
  }
};

/// Longest-path-to-sink lengths via reverse topological sweep. O(V + E).
RankTable compute_ranks(const AbstractDag& dag);

/// Immutable snapshot of one queued task, the unit the strategies order
/// and place. cpus are millicores.
struct CandidateTask {
  TaskId task_id;
  std::uint64_t submission_seq = 0;
  std::int64_t input_size_bytes = 0;
  std::int64_t rank = 0;
  std::int64_t cpus_milli = 0;
  std::int64_t memory_bytes = 0;
};

/// Immutable snapshot of one node's capacity and current allocation.
struct NodeView {
  NodeId id;
  std::int64_t total_cpus_milli = 0;
  std::int64_t total_memory_bytes = 0;
  std::int64_t allocated_cpus_milli = 0;
  std::int64_t allocated_memory_bytes = 0;
  bool online = true;

  std::int64_t free_cpus_milli() const {
    return total_cpus_milli - allocated_cpus_milli;
  }
  std::int64_t free_memory_bytes() const {
    return total_memory_bytes - allocated_memory_bytes;
  }
  bool fits(const CandidateTask& t) const {
    return online && free_cpus_milli() >= t.cpus_milli &&
           free_memory_bytes() >= t.memory_bytes;
  }
};

/// Orders the pending tasks into a total order:
///   FIFO       ascending submissionSeq
///   RANDOM     uniform shuffle from rng
///   SIZE_DESC  descending input size, ties FIFO
///   SIZE_ASC   ascending input size, ties FIFO
///   RANK_FIFO  descending rank, ties FIFO
///   RANK_MIN   descending rank, ties larger input first, then FIFO
///   RANK_MAX   descending rank, ties smaller input first, then FIFO
/// The final tie-break everywhere is submissionSeq, then TaskId.
std::vector<CandidateTask> prioritize(std::vector<CandidateTask> pending,
                                      Prioritization strategy, Rng& rng);

using RoundRobinCursor = std::size_t;

/// Picks a node with enough free cpus and memory, or nullopt when nothing
/// fits. ROUND_ROBIN probes from the cursor and advances it past the chosen
/// node; RANDOM draws uniformly among all feasible nodes; FAIR minimizes the
/// post-assignment utilization u = max(allocCpus'/totalCpus,
/// allocMem'/totalMem), ties broken by lowest NodeId.
std::optional<NodeId> assign(const CandidateTask& task,
                             const std::vector<NodeView>& nodes,
                             Assignment strategy, RoundRobinCursor& cursor,
                             Rng& rng);

/// The workflow-unaware baseline placement: the feasible node with the
/// lowest allocated-CPU fraction (spread), ties by lowest NodeId.
std::optional<NodeId> baseline_pick(const CandidateTask& task,
                                    const std::vector<NodeView>& nodes);

/// Baseline emulation over a whole queue: FIFO order, spread placement,
/// skipping tasks that fit nowhere. Depletes its private copy of the node
/// snapshots as it assigns, so the result never over-allocates.
std::vector<std::pair<TaskId, NodeId>> baseline_assign(
    std::vector<CandidateTask> pending, std::vector<NodeView> nodes);

}  // namespace cws
