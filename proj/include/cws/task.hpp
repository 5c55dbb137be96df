#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cws/clock.hpp"
#include "cws/dag.hpp"

namespace cws {

using TaskId = std::string;
using NodeId = std::string;

enum class TaskState {
  Submitted,
  Queued,
  Scheduled,
  Running,
  Finished,
  Failed,
  Withdrawn,
};

const char* task_state_name(TaskState s);
/// Inverse of task_state_name. Throws Errc::BadRequest on unknown names.
TaskState task_state_from_name(const std::string& name);
bool is_terminal(TaskState s);

/// Allowed lifecycle graph:
///   SUBMITTED -> QUEUED -> SCHEDULED -> RUNNING -> FINISHED | FAILED
///   SUBMITTED -> WITHDRAWN, QUEUED -> WITHDRAWN
bool transition_allowed(TaskState from, TaskState to);

struct FileSpec {
  std::string path;
  std::int64_t size_bytes = 0;
};

/// One concrete, runnable task linked to a vertex of the abstract DAG.
/// CPU requests are held in millicores so ledger arithmetic stays exact.
struct PhysicalTask {
  TaskId id;
  VertexId abstract_id;
  std::int64_t cpus_milli = 0;
  std::int64_t memory_bytes = 0;
  std::optional<std::int64_t> runtime_estimate_ms;
  std::vector<FileSpec> input_files;
  std::vector<FileSpec> output_files;
  std::int64_t input_size_bytes = 0;  // sum over input_files; the single
                                      // source for size-based prioritization
  TaskState state = TaskState::Submitted;
  TimestampMs submitted_at = 0;
  std::optional<TimestampMs> started_at;
  std::optional<TimestampMs> finished_at;
  std::optional<NodeId> assigned_node;
  std::uint64_t submission_seq = 0;
};

/// Moves the task through its state machine, stamping the matching
/// timestamp from the given clock value. Throws Errc::IllegalTransition
/// (naming both states) on any move the lifecycle graph forbids.
void transition_task(PhysicalTask& task, TaskState to, TimestampMs now);

}  // namespace cws
