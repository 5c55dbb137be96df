#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cws {

using VertexId = std::string;

struct AbstractVertex {
  VertexId id;
  std::string label;
};

using DagEdge = std::pair<VertexId, VertexId>;  // (from, to)

/// Mutable abstract task graph. Every mutation that would break acyclicity
/// or dangle an edge is rejected, so the graph is a DAG at all times.
/// The version counter bumps on every effective change; rank tables are
/// keyed to it.
class AbstractDag {
 public:
  /// Idempotent upsert. Returns true when the vertex was new.
  bool add_vertex(const AbstractVertex& v);

  /// Removes the vertex and its incident edges. No-op when absent.
  bool remove_vertex(const VertexId& id);

  /// Inserts the edge. Duplicate edges are no-ops (returns false).
  /// Throws Errc::UnknownVertex when an endpoint is missing and
  /// Errc::WouldCreateCycle when the edge would close a cycle.
  bool add_edge(const VertexId& from, const VertexId& to);

  /// Removes the edge. No-op when absent.
  bool remove_edge(const VertexId& from, const VertexId& to);

  bool has_vertex(const VertexId& id) const { return vertices_.count(id) > 0; }
  bool has_edge(const VertexId& from, const VertexId& to) const;

  const std::map<VertexId, AbstractVertex>& vertices() const { return vertices_; }
  const std::set<DagEdge>& edges() const { return edges_; }
  std::vector<VertexId> successors(const VertexId& id) const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::uint64_t version() const { return version_; }

 private:
  bool path_exists(const VertexId& from, const VertexId& to) const;

  std::map<VertexId, AbstractVertex> vertices_;
  std::set<DagEdge> edges_;
  std::map<VertexId, std::set<VertexId>> out_;
  std::uint64_t version_ = 0;
};

}  // namespace cws
