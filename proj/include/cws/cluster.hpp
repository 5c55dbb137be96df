#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cws/task.hpp"

namespace cws {

/// One cluster node. speed_factor multiplies task durations (1.0 = the
/// reference machine); offline nodes are never assignment candidates.
struct NodeState {
  NodeId id;
  std::int64_t total_cpus_milli = 0;
  std::int64_t total_memory_bytes = 0;
  double speed_factor = 1.0;
  bool online = true;
};

struct ClusterConfig {
  std::vector<NodeState> nodes;
  std::int64_t startup_overhead_ms = 0;

  /// Parses {"nodes":[{"id","cpus","memoryBytes","speedFactor"}],
  ///         "startupOverheadMs"} and validates it (at least one node,
  /// positive capacities). Throws Errc::BadRequest on malformed input.
  static ClusterConfig from_json_text(const std::string& text);
  static ClusterConfig from_file(const std::string& path);

  std::string to_json_text() const;
};

/// CPU requests travel as fractional cores in JSON and as millicores
/// internally.
std::int64_t cores_to_milli(double cores);
double milli_to_cores(std::int64_t milli);

}  // namespace cws
