#include "cws/ledger.hpp"

#include "cws/error.hpp"

namespace cws {

void ResourceLedger::add_node(const NodeState& node) {
  auto [it, inserted] = entries_.try_emplace(node.id, Entry{node, 0, 0});
  if (inserted) {
    order_.push_back(node.id);
  } else {
    it->second.node = node;  // refresh capacity/speed, keep allocations
  }
}

bool ResourceLedger::has_node(const NodeId& id) const {
  return entries_.count(id) > 0;
}

bool ResourceLedger::is_online(const NodeId& id) const {
  auto it = entries_.find(id);
  return it != entries_.end() && it->second.node.online;
}

double ResourceLedger::speed_factor(const NodeId& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw Error(Errc::UnknownNode, "unknown node '" + id + "'");
  }
  return it->second.node.speed_factor;
}

void ResourceLedger::set_online(const NodeId& id, bool online) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw Error(Errc::UnknownNode, "unknown node '" + id + "'");
  }
  it->second.node.online = online;
}

void ResourceLedger::reserve(const TaskId& task, const NodeId& node,
                             std::int64_t cpus_milli,
                             std::int64_t memory_bytes) {
  auto it = entries_.find(node);
  if (it == entries_.end()) {
    throw Error(Errc::UnknownNode, "unknown node '" + node + "'");
  }
  Entry& entry = it->second;
  if (!entry.node.online) {
    throw Error(Errc::NodeOffline, "node '" + node + "' is offline");
  }
  if (allocations_.count(task)) {
    throw Error(Errc::BadRequest, "task '" + task + "' already holds an allocation");
  }
  if (entry.allocated_cpus_milli + cpus_milli > entry.node.total_cpus_milli ||
      entry.allocated_memory_bytes + memory_bytes >
          entry.node.total_memory_bytes) {
    throw Error(Errc::BadRequest,
                "reservation for task '" + task + "' would over-allocate node '" +
                    node + "'");
  }
  entry.allocated_cpus_milli += cpus_milli;
  entry.allocated_memory_bytes += memory_bytes;
  allocations_[task] = Allocation{node, cpus_milli, memory_bytes};
}

void ResourceLedger::release(const TaskId& task) {
  auto it = allocations_.find(task);
  if (it == allocations_.end()) return;
  auto entry_it = entries_.find(it->second.node);
  if (entry_it != entries_.end()) {
    entry_it->second.allocated_cpus_milli -= it->second.cpus_milli;
    entry_it->second.allocated_memory_bytes -= it->second.memory_bytes;
  }
  allocations_.erase(it);
}

std::vector<TaskId> ResourceLedger::tasks_on(const NodeId& node) const {
  std::vector<TaskId> ids;
  for (const auto& [task, alloc] : allocations_) {
    if (alloc.node == node) ids.push_back(task);
  }
  return ids;
}

std::vector<NodeView> ResourceLedger::node_views() const {
  std::vector<NodeView> views;
  views.reserve(order_.size());
  for (const auto& id : order_) {
    const Entry& entry = entries_.at(id);
    NodeView view;
    view.id = id;
    view.total_cpus_milli = entry.node.total_cpus_milli;
    view.total_memory_bytes = entry.node.total_memory_bytes;
    view.allocated_cpus_milli = entry.allocated_cpus_milli;
    view.allocated_memory_bytes = entry.allocated_memory_bytes;
    view.online = entry.node.online;
    views.push_back(view);
  }
  return views;
}

std::vector<std::string> ResourceLedger::audit() const {
  std::vector<std::string> problems;
  std::map<NodeId, Allocation> sums;
  for (const auto& [task, alloc] : allocations_) {
    if (!entries_.count(alloc.node)) {
      problems.push_back("task " + task + " allocated on unknown node " +
                         alloc.node);
      continue;
    }
    Allocation& sum = sums[alloc.node];
    sum.cpus_milli += alloc.cpus_milli;
    sum.memory_bytes += alloc.memory_bytes;
  }
  for (const auto& [id, entry] : entries_) {
    if (entry.allocated_cpus_milli < 0 || entry.allocated_memory_bytes < 0) {
      problems.push_back("node " + id + " has negative allocation counters");
    }
    if (entry.allocated_cpus_milli > entry.node.total_cpus_milli) {
      problems.push_back("node " + id + " cpu over-allocated: " +
                         std::to_string(entry.allocated_cpus_milli) + " > " +
                         std::to_string(entry.node.total_cpus_milli));
    }
    if (entry.allocated_memory_bytes > entry.node.total_memory_bytes) {
      problems.push_back("node " + id + " memory over-allocated: " +
                         std::to_string(entry.allocated_memory_bytes) + " > " +
                         std::to_string(entry.node.total_memory_bytes));
    }
    const Allocation& sum = sums[id];
    if (sum.cpus_milli != entry.allocated_cpus_milli ||
        sum.memory_bytes != entry.allocated_memory_bytes) {
      problems.push_back("node " + id +
                         " counters do not reconcile with live allocations");
    }
  }
  return problems;
}

}  // namespace cws
