#include "cws/simulator.hpp"

#include "cws/error.hpp"

namespace cws {

void SimEventQueue::schedule_completion(TimestampMs at, std::string execution_id,
                                        TaskId task_id) {
  SimEvent e;
  e.at = at;
  e.seq = next_seq_++;
  e.kind = SimEventKind::TaskCompletes;
  e.execution_id = std::move(execution_id);
  e.task_id = std::move(task_id);
  // a re-dispatched id must not inherit an old cancellation
  cancelled_.erase({e.execution_id, e.task_id});
  queue_.push(std::move(e));
  ++live_count_;
}

void SimEventQueue::schedule_toggle(TimestampMs at, NodeId node_id, bool online) {
  SimEvent e;
  e.at = at;
  e.seq = next_seq_++;
  e.kind = SimEventKind::NodeToggle;
  e.node_id = std::move(node_id);
  e.online = online;
  queue_.push(std::move(e));
  ++live_count_;
}

void SimEventQueue::cancel_completion(const std::string& execution_id,
                                      const TaskId& task_id) {
  if (cancelled_.insert({execution_id, task_id}).second && live_count_ > 0) {
    --live_count_;
  }
}

bool SimEventQueue::is_cancelled(const SimEvent& e) const {
  return e.kind == SimEventKind::TaskCompletes &&
         cancelled_.count({e.execution_id, e.task_id}) > 0;
}

std::optional<TimestampMs> SimEventQueue::next_event_at() const {
  if (live_count_ == 0) return std::nullopt;
  // drop dead entries so the head is live
  auto* self = const_cast<SimEventQueue*>(this);
  while (!self->queue_.empty() && is_cancelled(self->queue_.top())) {
    self->cancelled_.erase({self->queue_.top().execution_id,
                            self->queue_.top().task_id});
    self->queue_.pop();
  }
  if (queue_.empty()) return std::nullopt;
  return queue_.top().at;
}

SimEvent SimEventQueue::pop_next() {
  while (!queue_.empty() && is_cancelled(queue_.top())) {
    cancelled_.erase({queue_.top().execution_id, queue_.top().task_id});
    queue_.pop();
  }
  if (queue_.empty()) {
    throw Error(Errc::NoPendingEvents, "no pending simulation events");
  }
  SimEvent e = queue_.top();
  queue_.pop();
  --live_count_;
  return e;
}

}  // namespace cws
