#include "cws/engine.hpp"

#include <algorithm>
#include <cmath>

#include "cws/error.hpp"

namespace cws {

namespace {

// Ledger allocation keys span executions, so they combine execution and
// task id. The separator cannot occur in a (URL-path-safe) execution id,
// which keeps the split unambiguous.
constexpr char kAllocSep = '\x1f';

std::string alloc_key(const std::string& exec, const TaskId& task) {
  return exec + kAllocSep + task;
}

std::pair<std::string, TaskId> split_alloc_key(const std::string& key) {
  auto pos = key.find(kAllocSep);
  return {key.substr(0, pos), key.substr(pos + 1)};
}

}  // namespace

bool valid_execution_id(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

SchedulerEngine::SchedulerEngine(ClusterConfig config)
    : config_(std::move(config)), clock_(0) {
  for (const auto& node : config_.nodes) {
    ledger_.add_node(node);
  }
}

std::string SchedulerEngine::create_execution(const std::string& id,
                                              const std::string& strategy,
                                              std::uint64_t seed) {
  std::lock_guard lock(mu_);
  if (!valid_execution_id(id)) {
    throw Error(Errc::InvalidExecutionId,
                "execution id must be 1..128 chars of [A-Za-z0-9_-]");
  }
  if (executions_.count(id)) {
    throw Error(Errc::DuplicateExecution,
                "execution '" + id + "' is already registered");
  }
  StrategyName parsed = StrategyName::parse(strategy);
  Execution e;
  e.id = id;
  e.strategy = parsed;
  e.created_at = clock_.now_ms();
  e.rng = Rng(seed);
  executions_.emplace(id, std::move(e));
  creation_order_.push_back(id);
  return parsed.to_string();
}

DeletionSummary SchedulerEngine::delete_execution(const std::string& id) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(id);
  const TimestampMs now = clock_.now_ms();
  DeletionSummary summary;
  for (auto& [task_id, task] : e.tasks) {
    switch (task.state) {
      case TaskState::Finished:
        ++summary.finished;
        break;
      case TaskState::Failed:
        ++summary.failed;
        break;
      case TaskState::Withdrawn:
        ++summary.withdrawn;
        break;
      case TaskState::Submitted:
      case TaskState::Queued:
        transition_task(task, TaskState::Withdrawn, now);
        log_transition_(e, task, "WITHDRAWN", now);
        ++summary.withdrawn;
        break;
      case TaskState::Scheduled:
      case TaskState::Running:
        // cancel in the simulator and release the node
        events_.cancel_completion(e.id, task_id);
        ledger_.release(alloc_key(e.id, task_id));
        transition_task(task, TaskState::Failed, now);
        log_transition_(e, task, "FAILED", now);
        ++summary.failed;
        break;
    }
  }
  archived_logs_[e.id] = e.log.to_jsonl();
  executions_.erase(id);
  creation_order_.erase(
      std::remove(creation_order_.begin(), creation_order_.end(), id),
      creation_order_.end());
  run_audit_hook_();
  return summary;
}

bool SchedulerEngine::execution_exists(const std::string& id) const {
  std::lock_guard lock(mu_);
  return executions_.count(id) > 0;
}

std::size_t SchedulerEngine::add_vertices(
    const std::string& exec, const std::vector<AbstractVertex>& vertices) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  for (const auto& v : vertices) {
    if (v.id.empty()) {
      throw Error(Errc::BadRequest, "vertex id must be non-empty");
    }
  }
  std::size_t added = 0;
  for (const auto& v : vertices) {
    if (e.dag.add_vertex(v)) ++added;
  }
  if (added > 0) alignment_round_(e);  // DAG_CHANGED
  run_audit_hook_();
  return added;
}

std::size_t SchedulerEngine::remove_vertices(const std::string& exec,
                                             const std::vector<VertexId>& ids) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  // all-or-nothing: check in-use before touching anything
  for (const auto& id : ids) {
    if (!e.dag.has_vertex(id)) continue;
    for (const auto& [task_id, task] : e.tasks) {
      if (task.abstract_id == id && !is_terminal(task.state)) {
        throw Error(Errc::VertexInUse, "vertex '" + id +
                                           "' is referenced by live task '" +
                                           task_id + "'");
      }
    }
  }
  std::size_t removed = 0;
  for (const auto& id : ids) {
    if (e.dag.remove_vertex(id)) ++removed;
  }
  if (removed > 0) alignment_round_(e);  // DAG_CHANGED
  run_audit_hook_();
  return removed;
}

std::size_t SchedulerEngine::add_edges(const std::string& exec,
                                       const std::vector<DagEdge>& edges) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  // all-or-nothing: apply to a scratch copy, swap in on success
  AbstractDag scratch = e.dag;
  std::size_t added = 0;
  for (const auto& [from, to] : edges) {
    if (scratch.add_edge(from, to)) ++added;
  }
  if (added > 0) {
    e.dag = std::move(scratch);
    alignment_round_(e);  // DAG_CHANGED
  }
  run_audit_hook_();
  return added;
}

std::size_t SchedulerEngine::remove_edges(const std::string& exec,
                                          const std::vector<DagEdge>& edges) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  std::size_t removed = 0;
  for (const auto& [from, to] : edges) {
    if (e.dag.remove_edge(from, to)) ++removed;
  }
  if (removed > 0) alignment_round_(e);  // DAG_CHANGED
  run_audit_hook_();
  return removed;
}

void SchedulerEngine::start_batch(const std::string& exec) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  if (e.batch.open) {
    throw Error(Errc::BatchAlreadyOpen,
                "execution '" + exec + "' already has an open batch");
  }
  e.batch.open = true;
}

TimestampMs SchedulerEngine::end_batch(const std::string& exec) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  if (!e.batch.open) {
    throw Error(Errc::NoBatchOpen, "execution '" + exec + "' has no open batch");
  }
  const TimestampMs now = clock_.now_ms();
  // atomically: every held task becomes QUEUED, then one alignment round
  // sees the whole set
  for (const auto& task_id : e.batch.held_tasks) {
    PhysicalTask& task = e.tasks.at(task_id);
    transition_task(task, TaskState::Queued, now);
    log_transition_(e, task, "QUEUED", now);
  }
  e.batch.held_tasks.clear();
  e.batch.open = false;
  alignment_round_(e);  // BATCH_CLOSED
  run_audit_hook_();
  return now;
}

GrantedResources SchedulerEngine::submit_task(const std::string& exec,
                                              const TaskId& id,
                                              const TaskSubmission& submission) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  if (id.empty()) {
    throw Error(Errc::BadRequest, "task id must be non-empty");
  }
  if (e.tasks.count(id)) {
    throw Error(Errc::DuplicateTask, "task '" + id + "' was already submitted");
  }
  if (!e.dag.has_vertex(submission.abstract_id)) {
    throw Error(Errc::UnknownAbstractVertex,
                "abstract vertex '" + submission.abstract_id + "' is unknown");
  }
  const std::int64_t cpus_milli = cores_to_milli(submission.cpus);
  if (cpus_milli <= 0) {
    throw Error(Errc::BadRequest, "cpus must be positive");
  }
  if (submission.memory_bytes <= 0) {
    throw Error(Errc::BadRequest, "memoryBytes must be positive");
  }
  if (submission.runtime_estimate_ms && *submission.runtime_estimate_ms < 0) {
    throw Error(Errc::BadRequest, "runtimeEstimateMs must be non-negative");
  }
  for (const auto& f : submission.input_files) {
    if (f.size_bytes < 0) {
      throw Error(Errc::BadRequest, "input file sizeBytes must be non-negative");
    }
  }

  const TimestampMs now = clock_.now_ms();
  PhysicalTask task;
  task.id = id;
  task.abstract_id = submission.abstract_id;
  task.cpus_milli = cpus_milli;
  task.memory_bytes = submission.memory_bytes;
  task.runtime_estimate_ms = submission.runtime_estimate_ms;
  task.input_files = submission.input_files;
  task.output_files = submission.output_files;
  task.input_size_bytes = 0;
  for (const auto& f : submission.input_files) {
    task.input_size_bytes += f.size_bytes;
  }
  task.state = TaskState::Submitted;
  task.submitted_at = now;
  task.submission_seq = e.next_submission_seq++;

  auto [it, inserted] = e.tasks.emplace(id, std::move(task));
  PhysicalTask& stored = it->second;
  log_transition_(e, stored, "SUBMITTED", now);

  if (e.batch.open) {
    e.batch.held_tasks.push_back(id);
  } else {
    // no open batch: the batch size is one, so queue and align immediately
    transition_task(stored, TaskState::Queued, now);
    log_transition_(e, stored, "QUEUED", now);
    alignment_round_(e);  // TASK_SUBMITTED
  }
  run_audit_hook_();

  GrantedResources granted;
  granted.cpus = milli_to_cores(cpus_milli);
  granted.memory_bytes = submission.memory_bytes;
  granted.runtime_ms = submission.runtime_estimate_ms.value_or(0);
  return granted;
}

TaskStatus SchedulerEngine::task_state(const std::string& exec,
                                       const TaskId& id) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  if (!e.tasks.count(id)) {
    throw Error(Errc::UnknownTask, "task '" + id + "' is unknown");
  }
  // Quiescence-driven time advance: only when the caller has already seen
  // everything this execution did (and no batch holds the scheduler back)
  // may the next simulation event fire — one event per query.
  if (!any_batch_open_() && !has_unreported_news_(e) && events_.has_pending()) {
    advance_one_event_();
  }
  TaskStatus status = snapshot_(e.tasks.at(id));
  e.last_reported[id] = status;
  return status;
}

void SchedulerEngine::withdraw_task(const std::string& exec, const TaskId& id) {
  std::lock_guard lock(mu_);
  Execution& e = find_execution_(exec);
  auto it = e.tasks.find(id);
  if (it == e.tasks.end()) {
    throw Error(Errc::UnknownTask, "task '" + id + "' is unknown");
  }
  PhysicalTask& task = it->second;
  if (task.state != TaskState::Submitted && task.state != TaskState::Queued) {
    throw Error(Errc::TaskNotWithdrawable,
                std::string("task '") + id + "' is " +
                    task_state_name(task.state) + " and cannot be withdrawn");
  }
  const TimestampMs now = clock_.now_ms();
  transition_task(task, TaskState::Withdrawn, now);
  auto& held = e.batch.held_tasks;
  held.erase(std::remove(held.begin(), held.end(), id), held.end());
  log_transition_(e, task, "WITHDRAWN", now);
  // the withdrawal is acknowledged to the caller by this very call
  e.last_reported[id] = snapshot_(task);
  run_audit_hook_();
}

void SchedulerEngine::toggle_node(const NodeId& id, bool online) {
  std::lock_guard lock(mu_);
  if (!ledger_.has_node(id)) {
    throw Error(Errc::UnknownNode, "unknown node '" + id + "'");
  }
  handle_toggle_(id, online);
  run_audit_hook_();
}

void SchedulerEngine::schedule_node_toggle(TimestampMs at, const NodeId& id,
                                           bool online) {
  std::lock_guard lock(mu_);
  if (!ledger_.has_node(id)) {
    throw Error(Errc::UnknownNode, "unknown node '" + id + "'");
  }
  events_.schedule_toggle(at, id, online);
}

TimestampMs SchedulerEngine::now_ms() const {
  std::lock_guard lock(mu_);
  return clock_.now_ms();
}

std::size_t SchedulerEngine::pending_event_count() const {
  std::lock_guard lock(mu_);
  return events_.pending_count();
}

std::vector<NodeView> SchedulerEngine::node_views() const {
  std::lock_guard lock(mu_);
  return ledger_.node_views();
}

std::vector<std::string> SchedulerEngine::audit_ledger() const {
  std::lock_guard lock(mu_);
  return ledger_.audit();
}

std::string SchedulerEngine::decision_log_jsonl(const std::string& exec) const {
  std::lock_guard lock(mu_);
  auto it = executions_.find(exec);
  if (it != executions_.end()) return it->second.log.to_jsonl();
  auto archived = archived_logs_.find(exec);
  if (archived != archived_logs_.end()) return archived->second;
  throw Error(Errc::UnknownExecution, "execution '" + exec + "' is unknown");
}

void SchedulerEngine::set_audit_hook(
    std::function<void(const std::vector<std::string>&)> hook) {
  std::lock_guard lock(mu_);
  audit_hook_ = std::move(hook);
}

// -- internals (callers hold mu_) -------------------------------------

SchedulerEngine::Execution& SchedulerEngine::find_execution_(
    const std::string& id) {
  auto it = executions_.find(id);
  if (it == executions_.end()) {
    throw Error(Errc::UnknownExecution, "execution '" + id + "' is unknown");
  }
  return it->second;
}

const SchedulerEngine::Execution& SchedulerEngine::find_execution_(
    const std::string& id) const {
  auto it = executions_.find(id);
  if (it == executions_.end()) {
    throw Error(Errc::UnknownExecution, "execution '" + id + "' is unknown");
  }
  return it->second;
}

TaskStatus SchedulerEngine::snapshot_(const PhysicalTask& task) {
  TaskStatus status;
  status.state = task.state;
  status.node = task.assigned_node;
  status.submitted_at = task.submitted_at;
  status.started_at = task.started_at;
  status.finished_at = task.finished_at;
  return status;
}

bool SchedulerEngine::any_batch_open_() const {
  for (const auto& [id, e] : executions_) {
    if (e.batch.open) return true;
  }
  return false;
}

bool SchedulerEngine::has_unreported_news_(const Execution& e) const {
  for (const auto& [task_id, task] : e.tasks) {
    auto it = e.last_reported.find(task_id);
    if (it == e.last_reported.end()) return true;
    if (!(it->second == snapshot_(task))) return true;
  }
  return false;
}

void SchedulerEngine::log_transition_(Execution& e, const PhysicalTask& task,
                                      const char* event, TimestampMs at) {
  e.log.append(e.id, task.id, task.abstract_id, event, task.assigned_node, at);
}

void SchedulerEngine::alignment_round_(Execution& e) {
  if (e.rank_cache.dag_version != e.dag.version() || e.rank_cache.ranks.empty()) {
    e.rank_cache = compute_ranks(e.dag);
  }
  std::vector<CandidateTask> pending;
  for (const auto& [task_id, task] : e.tasks) {
    if (task.state != TaskState::Queued) continue;
    CandidateTask c;
    c.task_id = task_id;
    c.submission_seq = task.submission_seq;
    c.input_size_bytes = task.input_size_bytes;
    c.rank = e.rank_cache.rank_of(task.abstract_id);
    c.cpus_milli = task.cpus_milli;
    c.memory_bytes = task.memory_bytes;
    pending.push_back(std::move(c));
  }
  if (pending.empty()) return;

  std::vector<CandidateTask> ordered;
  if (e.strategy.baseline) {
    Rng fifo_rng;  // FIFO ordering draws nothing
    ordered = prioritize(std::move(pending), Prioritization::Fifo, fifo_rng);
  } else {
    ordered = prioritize(std::move(pending), e.strategy.prioritization, e.rng);
  }

  for (const auto& candidate : ordered) {
    const auto views = ledger_.node_views();
    std::optional<NodeId> node =
        e.strategy.baseline
            ? baseline_pick(candidate, views)
            : assign(candidate, views, e.strategy.assignment, e.rr_cursor,
                     e.rng);
    if (!node) continue;  // skip, don't block: retried on the next event
    dispatch_(e, e.tasks.at(candidate.task_id), *node);
  }
}

void SchedulerEngine::alignment_all_() {
  for (const auto& id : creation_order_) {
    alignment_round_(executions_.at(id));
  }
}

void SchedulerEngine::dispatch_(Execution& e, PhysicalTask& task,
                                const NodeId& node) {
  const TimestampMs now = clock_.now_ms();
  ledger_.reserve(alloc_key(e.id, task.id), node, task.cpus_milli,
                  task.memory_bytes);
  transition_task(task, TaskState::Scheduled, now);
  task.assigned_node = node;
  log_transition_(e, task, "SCHEDULED", now);

  // The simulated node picks the task up after the fixed startup overhead;
  // the RUNNING stamp carries that (possibly future) instant.
  const TimestampMs started = now + config_.startup_overhead_ms;
  transition_task(task, TaskState::Running, started);
  log_transition_(e, task, "RUNNING", started);

  const double speed = ledger_.speed_factor(node);
  const std::int64_t runtime = task.runtime_estimate_ms.value_or(0);
  const auto duration = static_cast<TimestampMs>(
      std::llround(static_cast<double>(runtime) * speed));
  events_.schedule_completion(started + duration, e.id, task.id);
}

void SchedulerEngine::advance_one_event_() {
  SimEvent event = events_.pop_next();
  clock_.advance_to(event.at);
  if (event.kind == SimEventKind::TaskCompletes) {
    handle_completion_(event.execution_id, event.task_id);
  } else {
    handle_toggle_(event.node_id, event.online);
  }
  run_audit_hook_();
}

void SchedulerEngine::handle_completion_(const std::string& exec,
                                         const TaskId& task_id) {
  auto it = executions_.find(exec);
  if (it == executions_.end()) return;  // execution torn down first
  Execution& e = it->second;
  PhysicalTask& task = e.tasks.at(task_id);
  ledger_.release(alloc_key(e.id, task_id));
  transition_task(task, TaskState::Finished, clock_.now_ms());
  log_transition_(e, task, "FINISHED", *task.finished_at);
  alignment_all_();  // TASK_FINISHED: freed capacity may fit queued tasks
}

void SchedulerEngine::handle_toggle_(const NodeId& node, bool online) {
  if (ledger_.is_online(node) == online) return;  // idempotent
  ledger_.set_online(node, online);
  if (online) {
    alignment_all_();  // NODE_ADDED: new capacity
    return;
  }
  // NODE_REMOVED: every task running there fails, resources are freed
  const TimestampMs now = clock_.now_ms();
  for (const auto& key : ledger_.tasks_on(node)) {
    auto [exec_id, task_id] = split_alloc_key(key);
    auto it = executions_.find(exec_id);
    if (it == executions_.end()) continue;
    Execution& e = it->second;
    PhysicalTask& task = e.tasks.at(task_id);
    events_.cancel_completion(e.id, task_id);
    ledger_.release(key);
    transition_task(task, TaskState::Failed, now);
    log_transition_(e, task, "FAILED", *task.finished_at);
  }
}

void SchedulerEngine::run_audit_hook_() {
  if (audit_hook_) audit_hook_(ledger_.audit());
}

}  // namespace cws
