#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cws/clock.hpp"
#include "cws/task.hpp"

namespace cws {

enum class SimEventKind {
  TaskCompletes,
  NodeToggle,
};

/// One future occurrence in the simulated cluster. The queue is ordered by
/// (at, insertion sequence): FIFO among simultaneous events.
struct SimEvent {
  TimestampMs at = 0;
  std::uint64_t seq = 0;
  SimEventKind kind = SimEventKind::TaskCompletes;
  // TaskCompletes payload
  std::string execution_id;
  TaskId task_id;
  // NodeToggle payload
  NodeId node_id;
  bool online = false;
};

/// The simulator's pending-event queue. A completion can be cancelled when
/// its task or execution is torn down first; cancelled entries are dropped
/// lazily and never surface or count as pending.
class SimEventQueue {
 public:
  void schedule_completion(TimestampMs at, std::string execution_id,
                           TaskId task_id);
  void schedule_toggle(TimestampMs at, NodeId node_id, bool online);

  /// Cancels the pending completion of a task that is still RUNNING.
  /// Exactly one live completion per running task exists by construction.
  void cancel_completion(const std::string& execution_id, const TaskId& task_id);

  bool has_pending() const { return live_count_ > 0; }
  std::optional<TimestampMs> next_event_at() const;

  /// Removes and returns the earliest live event. Throws
  /// Errc::NoPendingEvents on an empty queue.
  SimEvent pop_next();

  std::size_t pending_count() const { return live_count_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  bool is_cancelled(const SimEvent& e) const;

  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::set<std::pair<std::string, TaskId>> cancelled_;
  std::uint64_t next_seq_ = 0;
  std::size_t live_count_ = 0;
};

}  // namespace cws
