#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cws/dag.hpp"
#include "cws/task.hpp"

namespace cws {

/// One physical task as recorded in a workflow trace. Predecessors are
/// physical task ids: the task may be submitted only once they are all
/// FINISHED (the dynamic-reveal rule).
struct TraceTask {
  TaskId id;
  VertexId abstract_id;
  std::vector<TaskId> predecessors;
  std::int64_t runtime_ms = 0;
  double cpus = 1.0;
  std::int64_t memory_bytes = 0;
  std::vector<FileSpec> input_files;
  std::vector<FileSpec> output_files;
};

/// A timed workflow-level DAG change, applied once the named task has been
/// observed FINISHED. Models conditional branches resolving at runtime.
struct TraceDagEdit {
  TaskId after_task;
  std::vector<AbstractVertex> add_vertices;
  std::vector<VertexId> remove_vertices;
  std::vector<DagEdge> add_edges;
  std::vector<DagEdge> remove_edges;
};

/// The replayable record of one workflow: the abstract DAG, every physical
/// task with its dependencies, and optional DAG edits.
struct WorkflowTrace {
  std::string name;
  std::vector<AbstractVertex> abstract_vertices;
  std::vector<DagEdge> abstract_edges;
  std::vector<TraceTask> physical_tasks;
  std::vector<TraceDagEdit> dag_edits;

  static WorkflowTrace from_json_text(const std::string& text);
  static WorkflowTrace from_file(const std::string& path);
  std::string to_json_text() const;
  void to_file(const std::string& path) const;
};

/// Structural checks: unique ids, known references, acyclic predecessor
/// graph, acyclic initial abstract DAG, positive resource requests, and
/// every abstractId available initially or added by an edit. Returns
/// human-readable violations; empty means the trace is replayable.
std::vector<std::string> validate_trace(const WorkflowTrace& trace);

}  // namespace cws
