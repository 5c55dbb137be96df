#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cws/clock.hpp"
#include "cws/cluster.hpp"
#include "cws/dag.hpp"
#include "cws/decision_log.hpp"
#include "cws/ledger.hpp"
#include "cws/rng.hpp"
#include "cws/simulator.hpp"
#include "cws/strategies.hpp"
#include "cws/task.hpp"

namespace cws {

/// Request payload for a physical-task submission. cpus are fractional
/// cores, the JSON wire form; the engine converts to millicores.
struct TaskSubmission {
  VertexId abstract_id;
  double cpus = 0.0;
  std::int64_t memory_bytes = 0;
  std::optional<std::int64_t> runtime_estimate_ms;
  std::vector<FileSpec> input_files;
  std::vector<FileSpec> output_files;
};

/// The resources the scheduler will actually use for the task — echoed
/// back to the submitter (requests are granted unmodified).
struct GrantedResources {
  double cpus = 0.0;
  std::int64_t memory_bytes = 0;
  std::int64_t runtime_ms = 0;
};

/// Observable task snapshot, the task-state query response.
struct TaskStatus {
  TaskState state = TaskState::Submitted;
  std::optional<NodeId> node;
  TimestampMs submitted_at = 0;
  std::optional<TimestampMs> started_at;
  std::optional<TimestampMs> finished_at;

  bool operator==(const TaskStatus&) const = default;
};

struct DeletionSummary {
  std::int64_t finished = 0;
  std::int64_t failed = 0;
  std::int64_t withdrawn = 0;
};

struct BatchState {
  bool open = false;
  std::vector<TaskId> held_tasks;  // submission order
};

/// The workflow-aware scheduler plus its simulated cluster, in one
/// serialization domain. All public methods are linearized by a single
/// engine mutex (which subsumes the per-execution serialization the API
/// contract requires); handlers on different engines run fully parallel.
///
/// Time is virtual and advances only at quiescence: a task-state query
/// advances exactly one simulation event when (a) no batch is open, (b) the
/// queried execution has no state changes the caller has not yet seen, and
/// (c) events are pending. The advance happens before the read, so pollers
/// always observe fresh state next.
class SchedulerEngine {
 public:
  explicit SchedulerEngine(ClusterConfig config);

  // -- execution registry -------------------------------------------------
  /// Returns the canonical strategy name. Throws DuplicateExecution,
  /// UnknownStrategy, InvalidExecutionId.
  std::string create_execution(const std::string& id,
                               const std::string& strategy,
                               std::uint64_t seed = 0);
  DeletionSummary delete_execution(const std::string& id);
  bool execution_exists(const std::string& id) const;

  // -- abstract DAG -------------------------------------------------------
  /// Idempotent upsert; returns the number of newly added vertices.
  std::size_t add_vertices(const std::string& exec,
                           const std::vector<AbstractVertex>& vertices);
  /// All-or-nothing; throws VertexInUse when a live task references one.
  /// Absent ids are no-ops. Removal drops incident edges.
  std::size_t remove_vertices(const std::string& exec,
                              const std::vector<VertexId>& ids);
  /// All-or-nothing; throws UnknownVertex / WouldCreateCycle.
  std::size_t add_edges(const std::string& exec,
                        const std::vector<DagEdge>& edges);
  /// Absent edges are no-ops; returns the number removed.
  std::size_t remove_edges(const std::string& exec,
                           const std::vector<DagEdge>& edges);

  // -- batching -----------------------------------------------------------
  void start_batch(const std::string& exec);
  /// Returns the close timestamp (the earliest instant any task of the
  /// batch may start).
  TimestampMs end_batch(const std::string& exec);

  // -- tasks --------------------------------------------------------------
  GrantedResources submit_task(const std::string& exec, const TaskId& id,
                               const TaskSubmission& submission);
  TaskStatus task_state(const std::string& exec, const TaskId& id);
  void withdraw_task(const std::string& exec, const TaskId& id);

  // -- simulated cluster control -------------------------------------
  /// Immediate toggle. Taking a node offline fails its running tasks.
  void toggle_node(const NodeId& id, bool online);
  /// Posts a NODE_TOGGLE simulation event for the given virtual time.
  void schedule_node_toggle(TimestampMs at, const NodeId& id, bool online);

  // -- introspection --------------------------------------------------
  TimestampMs now_ms() const;
  std::size_t pending_event_count() const;
  std::vector<NodeView> node_views() const;
  std::vector<std::string> audit_ledger() const;
  /// Decision log of a live execution, or the archived log of a deleted
  /// one. Throws UnknownExecution when the id was never registered.
  std::string decision_log_jsonl(const std::string& exec) const;

  /// Invoked with the ledger-audit result after every mutation the engine
  /// processes (submission, batch close, event, withdrawal, deletion,
  /// toggle). Tests install a hook that fails on any reported problem.
  void set_audit_hook(std::function<void(const std::vector<std::string>&)> hook);

 private:
  struct Execution {
    std::string id;
    StrategyName strategy;
    AbstractDag dag;
    std::map<TaskId, PhysicalTask> tasks;
    BatchState batch;
    TimestampMs created_at = 0;
    Rng rng;
    RoundRobinCursor rr_cursor = 0;
    std::uint64_t next_submission_seq = 0;
    RankTable rank_cache;
    DecisionLog log;
    // What each task looked like when last reported through task_state;
    // a missing or stale entry is unreported news and blocks time advance.
    std::map<TaskId, TaskStatus> last_reported;
  };

  Execution& find_execution_(const std::string& id);
  const Execution& find_execution_(const std::string& id) const;
  static TaskStatus snapshot_(const PhysicalTask& task);
  bool any_batch_open_() const;
  bool has_unreported_news_(const Execution& e) const;
  void log_transition_(Execution& e, const PhysicalTask& task,
                       const char* event, TimestampMs at);
  void alignment_round_(Execution& e);
  void alignment_all_();
  void dispatch_(Execution& e, PhysicalTask& task, const NodeId& node);
  void advance_one_event_();
  void handle_completion_(const std::string& exec, const TaskId& task);
  void handle_toggle_(const NodeId& node, bool online);
  void run_audit_hook_();

  mutable std::mutex mu_;
  ClusterConfig config_;
  VirtualClock clock_;
  ResourceLedger ledger_;
  SimEventQueue events_;
  std::map<std::string, Execution> executions_;
  std::vector<std::string> creation_order_;
  std::map<std::string, std::string> archived_logs_;
  std::function<void(const std::vector<std::string>&)> audit_hook_;
};

/// True iff the id is URL-path-safe: 1..128 chars from
/// [A-Za-z0-9_-].
bool valid_execution_id(const std::string& id);

}  // namespace cws
