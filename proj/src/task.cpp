#include "cws/task.hpp"

#include <string>

#include "cws/error.hpp"

namespace cws {

const char* task_state_name(TaskState s) {
  switch (s) {
    case TaskState::Submitted: return "SUBMITTED";
    case TaskState::Queued: return "QUEUED";
    case TaskState::Scheduled: return "SCHEDULED";
    case TaskState::Running: return "RUNNING";
    case TaskState::Finished: return "FINISHED";
    case TaskState::Failed: return "FAILED";
    case TaskState::Withdrawn: return "WITHDRAWN";
  }
  return "?";
}

TaskState task_state_from_name(const std::string& name) {
  static constexpr TaskState kAll[] = {
      TaskState::Submitted, TaskState::Queued,    TaskState::Scheduled,
      TaskState::Running,   TaskState::Finished,  TaskState::Failed,
      TaskState::Withdrawn,
  };
  for (TaskState s : kAll) {
    if (name == task_state_name(s)) return s;
  }
  throw Error(Errc::BadRequest, "unknown task state: " + name);
}

bool is_terminal(TaskState s) {
  return s == TaskState::Finished || s == TaskState::Failed ||
         s == TaskState::Withdrawn;
}

bool transition_allowed(TaskState from, TaskState to) {
  switch (from) {
    case TaskState::Submitted:
      return to == TaskState::Queued || to == TaskState::Withdrawn;
    case TaskState::Queued:
      return to == TaskState::Scheduled || to == TaskState::Withdrawn;
    case TaskState::Scheduled:
      return to == TaskState::Running;
    case TaskState::Running:
      return to == TaskState::Finished || to == TaskState::Failed;
    case TaskState::Finished:
    case TaskState::Failed:
    case TaskState::Withdrawn:
      return false;
  }
  return false;
}

void transition_task(PhysicalTask& task, TaskState to, TimestampMs now) {
  if (!transition_allowed(task.state, to)) {
    throw Error(Errc::IllegalTransition,
                std::string("illegal transition ") + task_state_name(task.state) +
                    " -> " + task_state_name(to) + " for task " + task.id);
  }
  switch (to) {
    case TaskState::Running:
      task.started_at = now;
      break;
    case TaskState::Finished:
    case TaskState::Failed: {
      // a cancellation can land inside the startup window; finished_at
      // must not precede started_at
      TimestampMs t = now;
      if (task.started_at && *task.started_at > t) t = *task.started_at;
      task.finished_at = t;
      break;
    }
    default:
      break;
  }
  task.state = to;
}

}  // namespace cws
