#include "cws/decision_log.hpp"

#include <nlohmann/json.hpp>

namespace cws {

std::string DecisionRecord::to_json_line() const {
  nlohmann::ordered_json doc;
  doc["executionId"] = execution_id;
  doc["taskId"] = task_id;
  doc["abstractId"] = abstract_id;
  doc["event"] = event;
  if (node_id) doc["nodeId"] = *node_id;
  doc["timestampMs"] = timestamp_ms;
  return doc.dump();
}

void DecisionLog::append(std::string execution_id, TaskId task_id,
                         VertexId abstract_id, std::string event,
                         std::optional<NodeId> node_id,
                         TimestampMs timestamp_ms) {
  records_.push_back(DecisionRecord{std::move(execution_id), std::move(task_id),
                                    std::move(abstract_id), std::move(event),
                                    std::move(node_id), timestamp_ms});
}

std::string DecisionLog::to_jsonl() const {
  std::string out;
  for (const auto& record : records_) {
    out += record.to_json_line();
    out += '\n';
  }
  return out;
}

std::size_t DecisionLog::count_event(const std::string& event) const {
  std::size_t n = 0;
  for (const auto& record : records_) {
    if (record.event == event) ++n;
  }
  return n;
}

}  // namespace cws
