#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cws/cluster.hpp"
#include "cws/strategies.hpp"
#include "cws/task.hpp"

namespace cws {

/// Tracks total vs. allocated CPU/memory per node plus every live per-task
/// allocation. The two views are kept reconciled; audit() proves it.
class ResourceLedger {
 public:
  struct Allocation {
    NodeId node;
    std::int64_t cpus_milli = 0;
    std::int64_t memory_bytes = 0;
  };

  void add_node(const NodeState& node);
  bool has_node(const NodeId& id) const;
  bool is_online(const NodeId& id) const;
  double speed_factor(const NodeId& id) const;
  void set_online(const NodeId& id, bool online);

  /// Reserves capacity for a task. Throws Errc::UnknownNode /
  /// Errc::NodeOffline / Errc::BadRequest (over-allocation — an internal
  /// logic error surfaced loudly rather than corrupting the ledger).
  void reserve(const TaskId& task, const NodeId& node, std::int64_t cpus_milli,
               std::int64_t memory_bytes);

  /// Releases a task's allocation. No-op for unknown tasks.
  void release(const TaskId& task);

  /// Task ids currently allocated on the node, in allocation-map order.
  std::vector<TaskId> tasks_on(const NodeId& node) const;

  bool is_allocated(const TaskId& task) const {
    return allocations_.count(task) > 0;
  }

  /// Capacity snapshots in node insertion (config) order — the stable
  /// ordering the round-robin cursor rotates over.
  std::vector<NodeView> node_views() const;

  /// Consistency check: 0 <= allocated <= total per node per resource, and
  /// the per-task allocations on each node sum to that node's counters.
  /// Returns human-readable violations; empty means sound.
  std::vector<std::string> audit() const;

 private:
  struct Entry {
    NodeState node;
    std::int64_t allocated_cpus_milli = 0;
    std::int64_t allocated_memory_bytes = 0;
  };

  std::vector<NodeId> order_;
  std::map<NodeId, Entry> entries_;
  std::map<TaskId, Allocation> allocations_;
};

}  // namespace cws
