#include "cws/dag.hpp"

#include <deque>

#include "cws/error.hpp"

namespace cws {

bool AbstractDag::add_vertex(const AbstractVertex& v) {
  auto [it, inserted] = vertices_.try_emplace(v.id, v);
  if (!inserted) return false;  // re-insert is an idempotent no-op
  ++version_;
  return true;
}

bool AbstractDag::remove_vertex(const VertexId& id) {
  if (vertices_.erase(id) == 0) return false;
  for (auto it = edges_.begin(); it != edges_.end();) {
    if (it->first == id || it->second == id) {
      out_[it->first].erase(it->second);
      it = edges_.erase(it);
    } else {
      ++it;
    }
  }
  out_.erase(id);
  ++version_;
  return true;
}

bool AbstractDag::add_edge(const VertexId& from, const VertexId& to) {
  if (!has_vertex(from)) {
    throw Error(Errc::UnknownVertex, "edge endpoint '" + from + "' is not a vertex");
  }
  if (!has_vertex(to)) {
    throw Error(Errc::UnknownVertex, "edge endpoint '" + to + "' is not a vertex");
  }
  if (edges_.count({from, to})) return false;
  // inserting from->to closes a cycle iff to already reaches from
  if (from == to || path_exists(to, from)) {
    throw Error(Errc::WouldCreateCycle,
                "edge " + from + " -> " + to + " would create a cycle");
  }
  edges_.insert({from, to});
  out_[from].insert(to);
  ++version_;
  return true;
}

bool AbstractDag::remove_edge(const VertexId& from, const VertexId& to) {
  if (edges_.erase({from, to}) == 0) return false;
  out_[from].erase(to);
  ++version_;
  return true;
}

bool AbstractDag::has_edge(const VertexId& from, const VertexId& to) const {
  return edges_.count({from, to}) > 0;
}

std::vector<VertexId> AbstractDag::successors(const VertexId& id) const {
  auto it = out_.find(id);
  if (it == out_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

bool AbstractDag::path_exists(const VertexId& from, const VertexId& to) const {
  if (from == to) return true;
  std::set<VertexId> seen{from};
  std::deque<VertexId> frontier{from};
  while (!frontier.empty()) {
    VertexId v = frontier.front();
    frontier.pop_front();
    auto it = out_.find(v);
    if (it == out_.end()) continue;
    for (const auto& next : it->second) {
      if (next == to) return true;
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return false;
}

}  // namespace cws
