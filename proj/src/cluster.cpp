#include "cws/cluster.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cws/error.hpp"

namespace cws {

using nlohmann::json;

std::int64_t cores_to_milli(double cores) {
  return static_cast<std::int64_t>(std::llround(cores * 1000.0));
}

double milli_to_cores(std::int64_t milli) {
  return static_cast<double>(milli) / 1000.0;
}

ClusterConfig ClusterConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::BadRequest, std::string("cluster config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw Error(Errc::BadRequest, "cluster config must be an object with a \"nodes\" array");
  }
  ClusterConfig cfg;
  cfg.startup_overhead_ms = doc.value("startupOverheadMs", std::int64_t{0});
  if (cfg.startup_overhead_ms < 0) {
    throw Error(Errc::BadRequest, "startupOverheadMs must be non-negative");
  }
  for (const auto& n : doc["nodes"]) {
    NodeState node;
    if (!n.is_object() || !n.contains("id") || !n.contains("cpus") ||
        !n.contains("memoryBytes")) {
      throw Error(Errc::BadRequest, "node entries need id, cpus, memoryBytes");
    }
    node.id = n["id"].get<std::string>();
    node.total_cpus_milli = cores_to_milli(n["cpus"].get<double>());
    node.total_memory_bytes = n["memoryBytes"].get<std::int64_t>();
    node.speed_factor = n.value("speedFactor", 1.0);
    node.online = true;
    if (node.id.empty() || node.total_cpus_milli <= 0 ||
        node.total_memory_bytes <= 0 || node.speed_factor <= 0.0) {
      throw Error(Errc::BadRequest, "node '" + node.id + "' has non-positive capacity");
    }
    cfg.nodes.push_back(std::move(node));
  }
  if (cfg.nodes.empty()) {
    throw Error(Errc::BadRequest, "cluster config needs at least one node");
  }
  return cfg;
}

ClusterConfig ClusterConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadRequest, "cannot open cluster config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ClusterConfig::to_json_text() const {
  json node_list = json::array();
  for (const auto& n : nodes) {
    node_list.push_back({{"id", n.id},
                         {"cpus", milli_to_cores(n.total_cpus_milli)},
                         {"memoryBytes", n.total_memory_bytes},
                         {"speedFactor", n.speed_factor}});
  }
  json doc{{"nodes", node_list}, {"startupOverheadMs", startup_overhead_ms}};
  return doc.dump(2);
}

}  // namespace cws
