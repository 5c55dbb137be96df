#include "cws/tracegen.hpp"

#include <algorithm>

namespace cws {

namespace {

constexpr std::int64_t kGiB = 1024LL * 1024 * 1024;

TraceTask make_task(TaskId id, VertexId vertex, std::vector<TaskId> preds,
                    std::int64_t runtime_ms, double cpus = 1.0,
                    std::int64_t memory_bytes = kGiB) {
  TraceTask t;
  t.id = std::move(id);
  t.abstract_id = std::move(vertex);
  t.predecessors = std::move(preds);
  t.runtime_ms = runtime_ms;
  t.cpus = cpus;
  t.memory_bytes = memory_bytes;
  return t;
}

}  // namespace

WorkflowTrace diamond_trace() {
  WorkflowTrace trace;
  trace.name = "diamond-6";
  trace.abstract_vertices = {
      {"A", "split"}, {"B", "left"}, {"C", "right"}, {"D", "merge"},
      {"E", "sink"},
  };
  trace.abstract_edges = {
      {"A", "B"}, {"A", "C"}, {"C", "D"}, {"B", "E"}, {"D", "E"},
  };
  trace.physical_tasks = {
      make_task("t1", "A", {}, 1000),
      make_task("t2", "B", {"t1"}, 1000),
      make_task("t3", "C", {"t1"}, 1000),
      make_task("t4", "C", {"t1"}, 1000),
      make_task("t5", "D", {"t3", "t4"}, 1000),
      make_task("t6", "E", {"t2", "t5"}, 1000),
  };
  return trace;
}

ClusterConfig two_slot_cluster() {
  ClusterConfig cfg;
  cfg.startup_overhead_ms = 0;
  for (const char* id : {"n1", "n2"}) {
    NodeState node;
    node.id = id;
    node.total_cpus_milli = 1000;
    node.total_memory_bytes = 4 * kGiB;
    node.speed_factor = 1.0;
    cfg.nodes.push_back(node);
  }
  return cfg;
}

WorkflowTrace chain_trace(std::size_t length, std::int64_t runtime_ms) {
  WorkflowTrace trace;
  trace.name = "chain-" + std::to_string(length);
  for (std::size_t i = 0; i < length; ++i) {
    const std::string v = "s" + std::to_string(i);
    trace.abstract_vertices.push_back({v, "stage " + std::to_string(i)});
    if (i > 0) {
      trace.abstract_edges.emplace_back("s" + std::to_string(i - 1), v);
    }
    std::vector<TaskId> preds;
    if (i > 0) preds.push_back("t" + std::to_string(i - 1));
    trace.physical_tasks.push_back(
        make_task("t" + std::to_string(i), v, std::move(preds), runtime_ms));
  }
  return trace;
}

WorkflowTrace fork_join_trace(std::size_t width, std::int64_t runtime_ms) {
  WorkflowTrace trace;
  trace.name = "fork-join-" + std::to_string(width);
  trace.abstract_vertices = {
      {"split", "split"}, {"work", "parallel work"}, {"join", "join"}};
  trace.abstract_edges = {{"split", "work"}, {"work", "join"}};
  trace.physical_tasks.push_back(make_task("split", "split", {}, runtime_ms));
  std::vector<TaskId> workers;
  for (std::size_t i = 0; i < width; ++i) {
    const TaskId id = "w" + std::to_string(i);
    workers.push_back(id);
    trace.physical_tasks.push_back(
        make_task(id, "work", {"split"}, runtime_ms));
  }
  trace.physical_tasks.push_back(
      make_task("join", "join", std::move(workers), runtime_ms));
  return trace;
}

WorkflowTrace layered_random_trace(Rng& rng, const LayeredTraceParams& params,
                                   const std::string& name) {
  WorkflowTrace trace;
  trace.name = name;

  const std::size_t layers = static_cast<std::size_t>(
      rng.uniform_int(2, static_cast<std::int64_t>(params.max_layers)));
  const std::size_t total = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(std::max(params.min_tasks, layers)),
      static_cast<std::int64_t>(params.max_tasks)));

  for (std::size_t l = 0; l < layers; ++l) {
    const std::string v = "layer" + std::to_string(l);
    trace.abstract_vertices.push_back({v, "layer " + std::to_string(l)});
    if (l > 0) {
      trace.abstract_edges.emplace_back("layer" + std::to_string(l - 1), v);
    }
    // occasional skip edge for more varied ranks
    if (l + 2 < layers && rng.uniform_below(5) == 0) {
      trace.abstract_edges.emplace_back(
          v, "layer" + std::to_string(l + 2));
    }
  }

  // spread tasks over layers, at least one per layer
  std::vector<std::size_t> layer_of_task;
  for (std::size_t l = 0; l < layers; ++l) layer_of_task.push_back(l);
  while (layer_of_task.size() < total) {
    layer_of_task.push_back(
        static_cast<std::size_t>(rng.uniform_below(layers)));
  }
  std::sort(layer_of_task.begin(), layer_of_task.end());

  std::vector<std::vector<TaskId>> tasks_per_layer(layers);
  const double cpu_steps[] = {0.25, 0.5, 1.0, 1.5, 2.0};
  for (std::size_t i = 0; i < layer_of_task.size(); ++i) {
    const std::size_t layer = layer_of_task[i];
    const TaskId id = "t" + std::to_string(i);
    std::vector<TaskId> preds;
    if (layer > 0) {
      const auto& prev = tasks_per_layer[layer - 1];
      const std::size_t want = 1 + rng.uniform_below(std::min<std::size_t>(3, prev.size()));
      std::vector<TaskId> pool = prev;
      rng.shuffle(pool);
      preds.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want));
      std::sort(preds.begin(), preds.end());
    }
    double cpus = cpu_steps[rng.uniform_below(5)];
    cpus = std::min(cpus, params.max_cpus);
    const std::int64_t memory =
        rng.uniform_int(params.min_memory_bytes, params.max_memory_bytes);
    const std::int64_t runtime = rng.uniform_int(0, params.max_runtime_ms);
    TraceTask task = make_task(id, "layer" + std::to_string(layer), preds,
                               runtime, cpus, memory);
    const std::size_t files = rng.uniform_below(4);
    for (std::size_t f = 0; f < files; ++f) {
      FileSpec spec;
      spec.path = "in/" + id + "/" + std::to_string(f) + ".dat";
      spec.size_bytes = rng.uniform_int(0, 1'000'000'000);
      task.input_files.push_back(std::move(spec));
    }
    trace.physical_tasks.push_back(std::move(task));
    tasks_per_layer[layer].push_back(id);
  }
  return trace;
}

ClusterConfig fuzz_cluster() {
  ClusterConfig cfg;
  cfg.startup_overhead_ms = 50;
  const struct {
    const char* id;
    std::int64_t cpus_milli;
    std::int64_t memory;
    double speed;
  } specs[] = {
      {"big-fast", 4000, 8 * kGiB, 1.0},
      {"small-slow", 2000, 4 * kGiB, 1.25},
      {"small-fast", 2000, 8 * kGiB, 0.8},
      {"big-slow", 4000, 4 * kGiB, 1.5},
  };
  for (const auto& s : specs) {
    NodeState node;
    node.id = s.id;
    node.total_cpus_milli = s.cpus_milli;
    node.total_memory_bytes = s.memory;
    node.speed_factor = s.speed;
    cfg.nodes.push_back(node);
  }
  return cfg;
}

WorkflowTrace critical_path_trace(Rng& rng, const CriticalPathParams& params,
                                  const std::string& name) {
  WorkflowTrace trace;
  trace.name = name;

  const auto width = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(params.min_width),
                      static_cast<std::int64_t>(params.max_width)));
  const auto chain = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(params.min_chain),
                      static_cast<std::int64_t>(params.max_chain)));

  trace.abstract_vertices.push_back({"root", "root"});
  trace.abstract_vertices.push_back({"wide", "fan-out work"});
  trace.abstract_edges.emplace_back("root", "wide");
  for (std::size_t i = 1; i <= chain; ++i) {
    const std::string v = "c" + std::to_string(i);
    trace.abstract_vertices.push_back({v, "chain step " + std::to_string(i)});
    trace.abstract_edges.emplace_back(
        i == 1 ? std::string("root") : "c" + std::to_string(i - 1), v);
  }

  trace.physical_tasks.push_back(
      make_task("t-root", "root",
                {}, rng.uniform_int(200, 800)));
  // wide tasks first in trace order: submission-order strategies run them
  // before the chain head
  for (std::size_t i = 1; i <= width; ++i) {
    trace.physical_tasks.push_back(make_task(
        "w" + std::to_string(i), "wide", {"t-root"},
        rng.uniform_int(params.wide_runtime_lo_ms, params.wide_runtime_hi_ms)));
  }
  for (std::size_t i = 1; i <= chain; ++i) {
    trace.physical_tasks.push_back(make_task(
        "k" + std::to_string(i), "c" + std::to_string(i),
        {i == 1 ? TaskId("t-root") : "k" + std::to_string(i - 1)},
        rng.uniform_int(params.chain_runtime_lo_ms,
                        params.chain_runtime_hi_ms)));
  }
  return trace;
}

ClusterConfig narrow_cluster() { return two_slot_cluster(); }

}  // namespace cws
