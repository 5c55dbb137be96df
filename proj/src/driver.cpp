#include "cws/driver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <thread>

#include "cws/error.hpp"

namespace cws {

namespace {

std::string derive_execution_id(const std::string& name) {
  std::string id;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    id += ok ? c : '-';
    if (id.size() == 128) break;
  }
  if (id.empty()) id = "run";
  return id;
}

DriverTaskRecord record_from_status(const TaskId& id, const TaskStatus& st) {
  DriverTaskRecord rec;
  rec.id = id;
  rec.state = st.state;
  rec.submitted_at = st.submitted_at;
  rec.started_at = st.started_at;
  rec.finished_at = st.finished_at;
  rec.node = st.node;
  return rec;
}

}  // namespace

RunResult run_trace(SchedulerClient& client, const WorkflowTrace& trace,
                    const RunConfig& config) {
  {
    auto violations = validate_trace(trace);
    if (!violations.empty()) {
      throw Error(Errc::TraceInvalid,
                  "trace '" + trace.name + "' is invalid (" +
                      std::to_string(violations.size()) +
                      " violation(s), first: " + violations.front() + ")");
    }
  }

  const std::string exec = config.execution_id.empty()
                               ? derive_execution_id(trace.name)
                               : config.execution_id;
  RunResult result;
  result.execution_id = exec;

  std::map<TaskId, const TraceTask*> by_id;
  for (const auto& t : trace.physical_tasks) by_id.emplace(t.id, &t);

  client.create_execution(exec, config.strategy, config.seed);
  bool deleted = false;
  try {
    if (!trace.abstract_vertices.empty()) {
      client.add_vertices(exec, trace.abstract_vertices);
    }
    if (!trace.abstract_edges.empty()) {
      client.add_edges(exec, trace.abstract_edges);
    }

    std::vector<const TraceTask*> pending;  // not yet submitted, trace order
    for (const auto& t : trace.physical_tasks) pending.push_back(&t);
    std::vector<TaskId> submitted_order;
    std::set<TaskId> finished;
    std::set<TaskId> terminal;
    std::set<TaskId> dropped;  // cancelled before they were ever submitted
    std::vector<bool> edit_applied(trace.dag_edits.size(), false);

    int stalled = 0;
    while (true) {
      bool progress = false;

      // 1. apply DAG edits whose trigger task has finished
      for (std::size_t i = 0; i < trace.dag_edits.size(); ++i) {
        if (edit_applied[i]) continue;
        const TraceDagEdit& edit = trace.dag_edits[i];
        if (!finished.count(edit.after_task)) continue;
        edit_applied[i] = true;
        progress = true;

        const std::set<VertexId> removed(edit.remove_vertices.begin(),
                                         edit.remove_vertices.end());
        if (!removed.empty()) {
          // withdraw the still-pending submitted tasks living on a removed
          // vertex, so the vertex carries no live task when it goes
          for (const TaskId& id : submitted_order) {
            if (terminal.count(id)) continue;
            if (!removed.count(by_id.at(id)->abstract_id)) continue;
            client.withdraw_task(exec, id);
            result.records[id].state = TaskState::Withdrawn;
            terminal.insert(id);
          }
          // never-submitted tasks on a removed vertex are simply dropped
          for (auto it = pending.begin(); it != pending.end();) {
            if (removed.count((*it)->abstract_id)) {
              dropped.insert((*it)->id);
              ++result.cancelled_before_submit;
              it = pending.erase(it);
            } else {
              ++it;
            }
          }
        }
        if (!edit.add_vertices.empty()) {
          client.add_vertices(exec, edit.add_vertices);
        }
        if (!edit.add_edges.empty()) client.add_edges(exec, edit.add_edges);
        if (!edit.remove_edges.empty()) {
          client.remove_edges(exec, edit.remove_edges);
        }
        if (!edit.remove_vertices.empty()) {
          client.remove_vertices(exec, edit.remove_vertices);
        }
      }

      // 2. a task whose predecessor can no longer finish will never be
      //    ready; drop such tasks transitively
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto it = pending.begin(); it != pending.end();) {
          bool unreachable = false;
          for (const TaskId& p : (*it)->predecessors) {
            if (dropped.count(p) ||
                (terminal.count(p) && !finished.count(p))) {
              unreachable = true;
              break;
            }
          }
          if (unreachable) {
            dropped.insert((*it)->id);
            ++result.cancelled_before_submit;
            it = pending.erase(it);
            changed = true;
            progress = true;
          } else {
            ++it;
          }
        }
      }

      // 3. reveal: batch-submit every task whose predecessors all finished
      std::vector<const TraceTask*> ready;
      for (const TraceTask* t : pending) {
        bool all_finished = true;
        for (const TaskId& p : t->predecessors) {
          if (!finished.count(p)) {
            all_finished = false;
            break;
          }
        }
        if (all_finished) ready.push_back(t);
      }
      if (!ready.empty()) {
        progress = true;
        const std::size_t chunk =
            config.batch_size == 0 ? ready.size() : config.batch_size;
        for (std::size_t start = 0; start < ready.size(); start += chunk) {
          const std::size_t stop = std::min(start + chunk, ready.size());
          client.start_batch(exec);
          for (std::size_t i = start; i < stop; ++i) {
            const TraceTask* t = ready[i];
            TaskSubmission s;
            s.abstract_id = t->abstract_id;
            s.cpus = t->cpus;
            s.memory_bytes = t->memory_bytes;
            s.runtime_estimate_ms = t->runtime_ms;
            s.input_files = t->input_files;
            s.output_files = t->output_files;
            client.submit_task(exec, t->id, s);
            // in-batch state query: records the submission timestamp and
            // can never advance simulated time while the batch is open
            result.records[t->id] =
                record_from_status(t->id, client.task_state(exec, t->id));
            submitted_order.push_back(t->id);
          }
          client.end_batch(exec);
        }
        std::set<TaskId> just_submitted;
        for (const TraceTask* t : ready) just_submitted.insert(t->id);
        pending.erase(std::remove_if(pending.begin(), pending.end(),
                                     [&](const TraceTask* t) {
                                       return just_submitted.count(t->id) > 0;
                                     }),
                      pending.end());
      } else {
        // 4. poll every revealed, still-live task in submission order
        int changes = 0;
        for (const TaskId& id : submitted_order) {
          if (terminal.count(id)) continue;
          TaskStatus st = client.task_state(exec, id);
          DriverTaskRecord rec = record_from_status(id, st);
          if (!(rec == result.records[id])) {
            result.records[id] = rec;
            ++changes;
          }
          if (is_terminal(st.state)) {
            terminal.insert(id);
            if (st.state == TaskState::Finished) finished.insert(id);
          }
        }
        if (changes > 0) progress = true;
      }

      if (pending.empty() && terminal.size() == submitted_order.size()) break;

      if (progress) {
        stalled = 0;
      } else {
        if (++stalled > config.stall_rounds) {
          throw Error(Errc::ExecutionFailed,
                      "run '" + exec + "' stalled: no progress after " +
                          std::to_string(config.stall_rounds) +
                          " poll rounds (a task may fit no node)");
        }
        if (config.poll_sleep_ms > 0) {
          std::this_thread::sleep_for(
              std::chrono::milliseconds(config.poll_sleep_ms));
        }
      }
    }

    // makespan and outcome counts, from interface responses alone
    std::optional<TimestampMs> first_submit;
    std::optional<TimestampMs> last_finish;
    for (const auto& [id, rec] : result.records) {
      switch (rec.state) {
        case TaskState::Finished: ++result.finished; break;
        case TaskState::Failed: ++result.failed; break;
        case TaskState::Withdrawn: ++result.withdrawn; break;
        default: break;
      }
      if (!first_submit || rec.submitted_at < *first_submit) {
        first_submit = rec.submitted_at;
      }
      if (rec.state == TaskState::Finished && rec.finished_at &&
          (!last_finish || *rec.finished_at > *last_finish)) {
        last_finish = rec.finished_at;
      }
    }
    if (first_submit && last_finish) {
      result.makespan_ms = *last_finish - *first_submit;
    }

    result.deletion = client.delete_execution(exec);
    deleted = true;
  } catch (...) {
    if (!deleted) {
      try {
        client.delete_execution(exec);
      } catch (...) {
        // the original error is the one worth reporting
      }
    }
    throw;
  }

  if (result.failed > 0) {
    throw Error(Errc::ExecutionFailed,
                "run '" + exec + "' had " + std::to_string(result.failed) +
                    " failed task(s) of " +
                    std::to_string(result.records.size()));
  }
  return result;
}

}  // namespace cws
