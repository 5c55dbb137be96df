#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cws/client.hpp"
#include "cws/driver.hpp"
#include "cws/engine.hpp"
#include "cws/error.hpp"
#include "cws/tracegen.hpp"

using namespace cws;

namespace {

struct ReplayFixture {
  SchedulerEngine engine;
  InProcessClient client;

  explicit ReplayFixture(ClusterConfig config = two_slot_cluster())
      : engine(std::move(config)), client(engine) {}

  RunResult run(const WorkflowTrace& trace, const std::string& strategy,
                std::size_t batch_size = 0) {
    RunConfig config;
    config.strategy = strategy;
    config.batch_size = batch_size;
    return run_trace(client, trace, config);
  }
};

/// The trace for a conditional branch that resolves negatively: once t2
/// finishes, the C/D arm is cut out of the DAG. t3 is submitted alongside
/// t2 but requests two cores — wider than any single-core node — so it is
/// still QUEUED (skipped, not blocking) when the edit withdraws it; t4 has
/// never been revealed and is dropped without a submission.
WorkflowTrace conditional_trace() {
  WorkflowTrace trace;
  trace.name = "conditional-4";
  trace.abstract_vertices = {{"A", ""}, {"B", ""}, {"C", ""}, {"D", ""}};
  trace.abstract_edges = {{"A", "B"}, {"A", "C"}, {"C", "D"}};
  auto task = [](TaskId id, VertexId vertex, std::vector<TaskId> preds,
                 std::int64_t runtime_ms, double cpus) {
    TraceTask t;
    t.id = std::move(id);
    t.abstract_id = std::move(vertex);
    t.predecessors = std::move(preds);
    t.runtime_ms = runtime_ms;
    t.cpus = cpus;
    t.memory_bytes = 1 << 20;
    return t;
  };
  trace.physical_tasks = {
      task("t1", "A", {}, 1000, 1.0),
      task("t2", "B", {"t1"}, 2000, 1.0),
      task("t3", "C", {"t1"}, 1000, 2.0),
      task("t4", "D", {"t3"}, 1000, 1.0),
  };
  TraceDagEdit edit;
  edit.after_task = "t2";
  edit.remove_vertices = {"C", "D"};
  trace.dag_edits = {edit};
  return trace;
}

}  // namespace

TEST_CASE("the six-task split/merge trace reveals and schedules as narrated") {
  SUBCASE("submission-order strategy takes five time units") {
    ReplayFixture fx;
    const RunResult result = fx.run(diamond_trace(), "fifo-round_robin");
    CHECK(result.makespan_ms == 5000);
    CHECK(result.finished == 6);
    CHECK(result.failed == 0);
    CHECK(result.withdrawn == 0);

    // dynamic reveal: t5 only after both C-tasks finished, t6 last
    const auto& r = result.records;
    CHECK(r.at("t1").submitted_at == 0);
    CHECK(r.at("t2").submitted_at == 1000);
    CHECK(r.at("t3").submitted_at == 1000);
    CHECK(r.at("t4").submitted_at == 1000);
    CHECK(r.at("t5").submitted_at == 3000);  // t4 had to wait for a slot
    CHECK(r.at("t6").submitted_at == 4000);
    CHECK(r.at("t6").finished_at == 5000);
  }

  SUBCASE("rank-aware strategies take four time units") {
    for (const char* strategy :
         {"rank_fifo-round_robin", "rank_min-round_robin",
          "rank_max-round_robin", "rank_fifo-fair", "rank_min-random"}) {
      ReplayFixture fx;
      CAPTURE(strategy);
      const RunResult result = fx.run(diamond_trace(), strategy);
      CHECK(result.makespan_ms == 4000);
      CHECK(result.finished == 6);
      const auto& r = result.records;
      CHECK(r.at("t5").submitted_at == 2000);  // C-arm ran first
      CHECK(r.at("t6").submitted_at == 3000);
    }
  }

  SUBCASE("baseline emulation matches the submission-order makespan") {
    ReplayFixture fx;
    CHECK(fx.run(diamond_trace(), "baseline_default").makespan_ms == 5000);
  }
}

TEST_CASE("single-task trace: makespan is startup overhead plus runtime") {
  ClusterConfig config;
  config.startup_overhead_ms = 500;
  config.nodes.push_back({"n1", 1000, 1LL << 30, 1.0, true});
  ReplayFixture fx(config);
  const RunResult result = fx.run(chain_trace(1, 1000), "fifo-round_robin");
  CHECK(result.makespan_ms == 1500);
  CHECK(result.finished == 1);
}

TEST_CASE("a DAG edit cuts the dead branch: withdrawn and cancelled tasks") {
  ReplayFixture fx;
  const RunResult result = fx.run(conditional_trace(), "fifo-round_robin");
  CHECK(result.finished == 2);  // t1, t2
  CHECK(result.withdrawn == 1);  // t3 was still queued
  CHECK(result.cancelled_before_submit == 1);  // t4 never revealed
  CHECK(result.failed == 0);
  CHECK(result.makespan_ms == 3000);  // t1 (1 s) then t2 (2 s)
  CHECK(result.records.at("t3").state == TaskState::Withdrawn);
  CHECK(result.records.count("t4") == 0);  // never submitted, no record
  CHECK(result.deletion.finished == 2);
  CHECK(result.deletion.withdrawn == 1);
  CHECK_FALSE(fx.engine.execution_exists(result.execution_id));
}

TEST_CASE("batch size chunking preserves the schedule of symmetric traces") {
  const WorkflowTrace trace = fork_join_trace(4, 1000);
  std::set<TimestampMs> makespans;
  for (std::size_t batch_size : {std::size_t{0}, std::size_t{1},
                                 std::size_t{2}, std::size_t{3}}) {
    ReplayFixture fx;
    const RunResult result = fx.run(trace, "fifo-round_robin", batch_size);
    CHECK(result.finished == 6);
    makespans.insert(result.makespan_ms);
  }
  CHECK(makespans.size() == 1);  // identical under any chunking
  CHECK(*makespans.begin() == 4000);
}

TEST_CASE("invalid traces are rejected before any interface call") {
  WorkflowTrace broken = diamond_trace();
  broken.physical_tasks[0].predecessors = {"t6"};
  ReplayFixture fx;
  CHECK_THROWS_AS(fx.run(broken, "fifo-round_robin"), Error);
  CHECK_FALSE(fx.engine.execution_exists("diamond-6"));
}

TEST_CASE("a trace that can never be placed stalls into ExecutionFailed") {
  WorkflowTrace trace = chain_trace(1, 1000);
  trace.physical_tasks[0].cpus = 64.0;  // no node is this big
  ReplayFixture fx;
  bool threw = false;
  try {
    fx.run(trace, "fifo-round_robin");
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == Errc::ExecutionFailed);
  }
  CHECK(threw);
  // the execution was still torn down
  CHECK_FALSE(fx.engine.execution_exists(trace.name));
}

TEST_CASE("driver records agree with the scheduler's decision log") {
  SchedulerEngine engine(two_slot_cluster());
  InProcessClient client(engine);
  RunConfig config;
  config.strategy = "rank_min-round_robin";
  config.execution_id = "audit";
  const RunResult result = run_trace(client, diamond_trace(), config);

  std::map<TaskId, TimestampMs> finished_in_log;
  std::map<TaskId, TimestampMs> submitted_in_log;
  std::istringstream log(engine.decision_log_jsonl("audit"));
  std::string line;
  while (std::getline(log, line)) {
    const auto doc = nlohmann::json::parse(line);
    const TaskId id = doc.at("taskId").get<TaskId>();
    const auto event = doc.at("event").get<std::string>();
    if (event == "FINISHED") {
      finished_in_log[id] = doc.at("timestampMs").get<TimestampMs>();
    } else if (event == "SUBMITTED") {
      submitted_in_log[id] = doc.at("timestampMs").get<TimestampMs>();
    }
  }
  REQUIRE(finished_in_log.size() == 6);
  for (const auto& [id, record] : result.records) {
    CHECK(record.finished_at == finished_in_log.at(id));
    CHECK(record.submitted_at == submitted_in_log.at(id));
  }

  // reveal correctness: nothing was submitted before its predecessors
  // finished (checked against the trace's dependency list)
  for (const auto& task : diamond_trace().physical_tasks) {
    for (const auto& pred : task.predecessors) {
      CHECK(finished_in_log.at(pred) <= submitted_in_log.at(task.id));
    }
  }
}

TEST_CASE("layered random traces replay cleanly under every strategy family") {
  Rng rng(2024);
  LayeredTraceParams params;
  params.max_tasks = 40;
  for (int round = 0; round < 3; ++round) {
    const auto trace =
        layered_random_trace(rng, params, "fuzz-" + std::to_string(round));
    for (const char* strategy :
         {"fifo-round_robin", "random-random", "size_desc-fair",
          "rank_max-random", "baseline_default"}) {
      ReplayFixture fx(fuzz_cluster());
      CAPTURE(round);
      CAPTURE(strategy);
      std::vector<std::string> audit_problems;
      fx.engine.set_audit_hook(
          [&](const std::vector<std::string>& problems) {
            for (const auto& p : problems) audit_problems.push_back(p);
          });
      RunConfig config;
      config.strategy = strategy;
      config.seed = static_cast<std::uint64_t>(round);
      const RunResult result = run_trace(fx.client, trace, config);
      CHECK(result.finished ==
            static_cast<std::int64_t>(trace.physical_tasks.size()));
      CHECK(result.failed == 0);
      CHECK(audit_problems.empty());
    }
  }
}
