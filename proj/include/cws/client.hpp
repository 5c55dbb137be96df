#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cws/dag.hpp"
#include "cws/engine.hpp"
#include "cws/task.hpp"

namespace cws {

/// The scheduler as seen by a workflow client: one method per interface
/// operation. Implementations throw cws::Error with the same codes the
/// service reports, so callers are transport-agnostic.
class SchedulerClient {
 public:
  virtual ~SchedulerClient() = default;

  virtual std::string create_execution(const std::string& exec,
                                       const std::string& strategy,
                                       std::uint64_t seed) = 0;
  virtual DeletionSummary delete_execution(const std::string& exec) = 0;
  virtual std::size_t add_vertices(const std::string& exec,
                                   const std::vector<AbstractVertex>& vs) = 0;
  virtual std::size_t remove_vertices(const std::string& exec,
                                      const std::vector<VertexId>& ids) = 0;
  virtual std::size_t add_edges(const std::string& exec,
                                const std::vector<DagEdge>& edges) = 0;
  virtual std::size_t remove_edges(const std::string& exec,
                                   const std::vector<DagEdge>& edges) = 0;
  virtual void start_batch(const std::string& exec) = 0;
  virtual void end_batch(const std::string& exec) = 0;
  virtual GrantedResources submit_task(const std::string& exec,
                                       const TaskId& id,
                                       const TaskSubmission& submission) = 0;
  virtual TaskStatus task_state(const std::string& exec, const TaskId& id) = 0;
  virtual void withdraw_task(const std::string& exec, const TaskId& id) = 0;
};

/// Direct calls into an engine living in the same process.
class InProcessClient final : public SchedulerClient {
 public:
  explicit InProcessClient(SchedulerEngine& engine) : engine_(engine) {}

  std::string create_execution(const std::string& exec,
                               const std::string& strategy,
                               std::uint64_t seed) override {
    return engine_.create_execution(exec, strategy, seed);
  }
  DeletionSummary delete_execution(const std::string& exec) override {
    return engine_.delete_execution(exec);
  }
  std::size_t add_vertices(const std::string& exec,
                           const std::vector<AbstractVertex>& vs) override {
    return engine_.add_vertices(exec, vs);
  }
  std::size_t remove_vertices(const std::string& exec,
                              const std::vector<VertexId>& ids) override {
    return engine_.remove_vertices(exec, ids);
  }
  std::size_t add_edges(const std::string& exec,
                        const std::vector<DagEdge>& edges) override {
    return engine_.add_edges(exec, edges);
  }
  std::size_t remove_edges(const std::string& exec,
                           const std::vector<DagEdge>& edges) override {
    return engine_.remove_edges(exec, edges);
  }
  void start_batch(const std::string& exec) override {
    engine_.start_batch(exec);
  }
  void end_batch(const std::string& exec) override { engine_.end_batch(exec); }
  GrantedResources submit_task(const std::string& exec, const TaskId& id,
                               const TaskSubmission& submission) override {
    return engine_.submit_task(exec, id, submission);
  }
  TaskStatus task_state(const std::string& exec, const TaskId& id) override {
    return engine_.task_state(exec, id);
  }
  void withdraw_task(const std::string& exec, const TaskId& id) override {
    engine_.withdraw_task(exec, id);
  }

 private:
  SchedulerEngine& engine_;
};

}  // namespace cws
