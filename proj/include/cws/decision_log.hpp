#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cws/clock.hpp"
#include "cws/task.hpp"

namespace cws {

/// One JSON Lines record per task state transition (the SCHEDULED record,
/// which carries the chosen node, doubles as the schedule decision).
/// Field order is fixed so logs are byte-stable.
struct DecisionRecord {
  std::string execution_id;
  TaskId task_id;
  VertexId abstract_id;
  std::string event;  // SUBMITTED/QUEUED/SCHEDULED/RUNNING/FINISHED/FAILED/WITHDRAWN
  std::optional<NodeId> node_id;
  TimestampMs timestamp_ms = 0;

  std::string to_json_line() const;
};

class DecisionLog {
 public:
  void append(std::string execution_id, TaskId task_id, VertexId abstract_id,
              std::string event, std::optional<NodeId> node_id,
              TimestampMs timestamp_ms);

  const std::vector<DecisionRecord>& records() const { return records_; }

  /// Whole log as JSON Lines (one record per line, trailing newline).
  std::string to_jsonl() const;

  /// Count of records carrying the given event name.
  std::size_t count_event(const std::string& event) const;

  void clear() { records_.clear(); }

 private:
  std::vector<DecisionRecord> records_;
};

}  // namespace cws
