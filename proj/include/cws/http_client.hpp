#pragma once

#include <memory>
#include <string>

#include "cws/client.hpp"

namespace httplib {
class Client;
}

namespace cws {

/// SchedulerClient over HTTP/JSON. Service errors are rethrown with the
/// code carried in the error body; transport failures surface as
/// SCHEDULER_UNREACHABLE.
class HttpClient final : public SchedulerClient {
 public:
  /// base_url like "http://127.0.0.1:8080" (no trailing slash needed).
  explicit HttpClient(const std::string& base_url);
  ~HttpClient() override;

  std::string create_execution(const std::string& exec,
                               const std::string& strategy,
                               std::uint64_t seed) override;
  DeletionSummary delete_execution(const std::string& exec) override;
  std::size_t add_vertices(const std::string& exec,
                           const std::vector<AbstractVertex>& vs) override;
  std::size_t remove_vertices(const std::string& exec,
                              const std::vector<VertexId>& ids) override;
  std::size_t add_edges(const std::string& exec,
                        const std::vector<DagEdge>& edges) override;
  std::size_t remove_edges(const std::string& exec,
                           const std::vector<DagEdge>& edges) override;
  void start_batch(const std::string& exec) override;
  void end_batch(const std::string& exec) override;
  GrantedResources submit_task(const std::string& exec, const TaskId& id,
                               const TaskSubmission& submission) override;
  TaskStatus task_state(const std::string& exec, const TaskId& id) override;
  void withdraw_task(const std::string& exec, const TaskId& id) override;

 private:
  std::unique_ptr<httplib::Client> http_;
};

}  // namespace cws
