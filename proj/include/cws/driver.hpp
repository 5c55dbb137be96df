#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cws/client.hpp"
#include "cws/trace.hpp"

namespace cws {

struct RunConfig {
  /// Execution id to register; empty derives one from the trace name.
  std::string execution_id;
  std::string strategy = "fifo-round_robin";
  std::uint64_t seed = 0;
  /// Maximum tasks per batch; 0 means unlimited (one batch per ready set).
  std::size_t batch_size = 0;
  /// Sleep between poll rounds. 0 for in-process replay (state queries are
  /// exact quiescence barriers); ~50 ms against a remote endpoint.
  int poll_sleep_ms = 0;
  /// Consecutive no-progress poll rounds tolerated before the run is
  /// declared stalled.
  int stall_rounds = 8;
};

/// The driver's record of one task, assembled purely from interface
/// responses (submission echo, state queries, withdrawal acknowledgments).
struct DriverTaskRecord {
  TaskId id;
  TaskState state = TaskState::Submitted;
  TimestampMs submitted_at = 0;
  std::optional<TimestampMs> started_at;
  std::optional<TimestampMs> finished_at;
  std::optional<NodeId> node;

  bool operator==(const DriverTaskRecord&) const = default;
};

struct RunResult {
  std::string execution_id;
  /// max(finishedAt) - min(submittedAt) over the execution's tasks.
  TimestampMs makespan_ms = 0;
  /// Final per-task records, keyed by task id, submission included.
  std::map<TaskId, DriverTaskRecord> records;
  std::int64_t finished = 0;
  std::int64_t failed = 0;
  std::int64_t withdrawn = 0;
  /// Tasks dropped by DAG edits before they were ever submitted.
  std::int64_t cancelled_before_submit = 0;
  /// The scheduler's own summary returned by the deletion call.
  DeletionSummary deletion;
};

/// Replays a workflow trace against a scheduler: registers the execution,
/// transfers the DAG, then loops — applying due DAG edits, withdrawing
/// tasks those edits cancel, batch-submitting every task whose
/// predecessors have all finished (in trace order), and polling task
/// states — until every revealed task is terminal. Deletes the execution
/// before returning. Throws TraceInvalid, ExecutionFailed (a task FAILED,
/// or the run stalled), or whatever transport error the client surfaces.
RunResult run_trace(SchedulerClient& client, const WorkflowTrace& trace,
                    const RunConfig& config);

}  // namespace cws
