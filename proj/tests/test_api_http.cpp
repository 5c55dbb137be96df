#include <doctest.h>

#include <memory>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cws/api.hpp"
#include "cws/driver.hpp"
#include "cws/engine.hpp"
#include "cws/http_client.hpp"
#include "cws/tracegen.hpp"

using namespace cws;
using nlohmann::json;

namespace {

/// One live service on an ephemeral loopback port per test case.
struct ServiceFixture {
  SchedulerEngine engine;
  ApiServer server;
  int port;
  httplib::Client raw;

  ServiceFixture()
      : engine(two_slot_cluster()),
        server(engine),
        port(server.start("127.0.0.1", 0)),
        raw("127.0.0.1", port) {}

  ~ServiceFixture() { server.stop(); }

  json post(const std::string& path, const json& body) {
    auto res = raw.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    last_status = res->status;
    return json::parse(res->body);
  }
  json get(const std::string& path) {
    auto res = raw.Get(path);
    REQUIRE(res);
    last_status = res->status;
    return json::parse(res->body);
  }
  json put(const std::string& path) {
    auto res = raw.Put(path, "", "application/json");
    REQUIRE(res);
    last_status = res->status;
    return json::parse(res->body);
  }
  json del(const std::string& path, const json& body = json()) {
    auto res = body.is_null()
                   ? raw.Delete(path)
                   : raw.Delete(path, body.dump(), "application/json");
    REQUIRE(res);
    last_status = res->status;
    return json::parse(res->body);
  }

  int last_status = 0;
};

json task_body(const std::string& abstract_id, std::int64_t runtime_ms,
               double cpus = 1.0) {
  json body;
  body["abstractId"] = abstract_id;
  body["cpus"] = cpus;
  body["memoryBytes"] = 1 << 20;
  body["runtimeEstimateMs"] = runtime_ms;
  body["inputFiles"] = json::array();
  return body;
}

}  // namespace

TEST_CASE("the version segment is checked before anything else") {
  ServiceFixture fx;
  const json created =
      fx.post("/v2/run-1", {{"strategy", "fifo-round_robin"}});
  CHECK(fx.last_status == 404);
  CHECK(created.at("code") == "UNKNOWN_VERSION");
  CHECK(created.contains("message"));

  // same answer on deeper routes, even for executions that do exist
  fx.post("/v1/run-1", {{"strategy", "fifo-round_robin"}});
  CHECK(fx.last_status == 200);
  fx.get("/weird/run-1/task/t1");
  CHECK(fx.last_status == 404);
}

TEST_CASE("execution registration over the wire") {
  ServiceFixture fx;
  const json created =
      fx.post("/v1/run-1", {{"strategy", "rank_min-round_robin"},
                            {"seed", 7},
                            {"operator", "ignored extra field"}});
  CHECK(fx.last_status == 200);
  CHECK(created.at("execution") == "run-1");
  CHECK(created.at("strategy") == "rank_min-round_robin");

  CHECK(fx.post("/v1/run-1", {{"strategy", "fifo-fair"}}).at("code") ==
        "DUPLICATE_EXECUTION");
  CHECK(fx.last_status == 409);

  CHECK(fx.post("/v1/run-2", {{"strategy", "quantum-annealing"}})
            .at("code") == "UNKNOWN_STRATEGY");
  CHECK(fx.last_status == 400);

  CHECK(fx.post("/v1/bad%20id", {{"strategy", "fifo-fair"}}).at("code") ==
        "INVALID_EXECUTION_ID");
  CHECK(fx.last_status == 400);

  fx.post("/v1/run-3", json::object());
  CHECK(fx.last_status == 400);  // strategy is mandatory

  const json deleted = fx.del("/v1/run-1");
  CHECK(fx.last_status == 200);
  CHECK(deleted.at("finished") == 0);
  CHECK(deleted.at("failed") == 0);
  CHECK(deleted.at("withdrawn") == 0);
  CHECK(fx.del("/v1/run-1").at("code") == "UNKNOWN_EXECUTION");
  CHECK(fx.last_status == 404);
}

TEST_CASE("rows beyond registration answer 404 for unknown executions") {
  ServiceFixture fx;
  const std::pair<const char*, const char*> probes[] = {
      {"POST", "/v1/ghost/DAG/vertices"}, {"DELETE", "/v1/ghost/DAG/vertices"},
      {"POST", "/v1/ghost/DAG/edges"},    {"DELETE", "/v1/ghost/DAG/edges"},
      {"PUT", "/v1/ghost/startBatch"},    {"PUT", "/v1/ghost/endBatch"},
      {"GET", "/v1/ghost/task/t1"},       {"DELETE", "/v1/ghost/task/t1"},
      {"DELETE", "/v1/ghost"},
  };
  for (const auto& [method, path] : probes) {
    CAPTURE(method);
    CAPTURE(path);
    json body;
    if (std::string(method) == "POST") {
      body = fx.post(path, json::array());
    } else if (std::string(method) == "PUT") {
      body = fx.put(path);
    } else if (std::string(method) == "GET") {
      body = fx.get(path);
    } else {
      body = fx.del(path, json::array());
    }
    CHECK(fx.last_status == 404);
    CHECK(body.at("code") == "UNKNOWN_EXECUTION");
  }
  // task submission too
  fx.post("/v1/ghost/task/t1", task_body("A", 100));
  CHECK(fx.last_status == 404);
}

TEST_CASE("DAG rows: upserts, cycles, in-use vertices, idempotent deletes") {
  ServiceFixture fx;
  fx.post("/v1/e", {{"strategy", "fifo-round_robin"}});

  json added = fx.post("/v1/e/DAG/vertices",
                       json::array({{{"id", "A"}, {"label", "start"}},
                                    {{"id", "B"}, {"label", "end"}}}));
  CHECK(fx.last_status == 200);
  CHECK(added.at("added") == 2);
  added = fx.post("/v1/e/DAG/vertices",
                  json::array({{{"id", "A"}, {"label", "again"}}}));
  CHECK(added.at("added") == 0);  // idempotent upsert

  json edges =
      fx.post("/v1/e/DAG/edges", json::array({{{"from", "A"}, {"to", "B"}}}));
  CHECK(edges.at("added") == 1);
  CHECK(fx.post("/v1/e/DAG/edges",
                json::array({{{"from", "B"}, {"to", "A"}}}))
            .at("code") == "WOULD_CREATE_CYCLE");
  CHECK(fx.last_status == 409);
  CHECK(fx.post("/v1/e/DAG/edges",
                json::array({{{"from", "A"}, {"to", "GHOST"}}}))
            .at("code") == "UNKNOWN_VERTEX");
  CHECK(fx.last_status == 400);

  // a live task pins its vertex
  fx.post("/v1/e/task/t1", task_body("A", 60000));
  CHECK(fx.last_status == 200);
  CHECK(fx.del("/v1/e/DAG/vertices", json::array({"A"})).at("code") ==
        "VERTEX_IN_USE");
  CHECK(fx.last_status == 409);

  const json removed = fx.del("/v1/e/DAG/edges",
                              json::array({{{"from", "A"}, {"to", "B"}},
                                           {{"from", "B"}, {"to", "B"}}}));
  CHECK(fx.last_status == 200);
  CHECK(removed.at("removed") == 1);  // absent edges are no-ops
  CHECK(fx.del("/v1/e/DAG/vertices", json::array({"B"})).at("removed") == 1);
}

TEST_CASE("batch rows gate and release over the wire") {
  ServiceFixture fx;
  fx.post("/v1/e", {{"strategy", "fifo-round_robin"}});
  fx.post("/v1/e/DAG/vertices", json::array({{{"id", "V"}}}));

  json opened = fx.put("/v1/e/startBatch");
  CHECK(fx.last_status == 200);
  CHECK(opened.at("batch") == "open");
  CHECK(fx.put("/v1/e/startBatch").at("code") == "BATCH_ALREADY_OPEN");
  CHECK(fx.last_status == 409);

  fx.post("/v1/e/task/t1", task_body("V", 1000));
  CHECK(fx.get("/v1/e/task/t1").at("state") == "SUBMITTED");

  const json closed = fx.put("/v1/e/endBatch");
  CHECK(fx.last_status == 200);
  CHECK(closed.at("batch") == "closed");
  REQUIRE(closed.contains("closedAt"));
  const auto closed_at = closed.at("closedAt").get<std::int64_t>();

  const json running = fx.get("/v1/e/task/t1");
  CHECK(running.at("state") == "RUNNING");
  CHECK(running.at("startedAt").get<std::int64_t>() >= closed_at);

  CHECK(fx.put("/v1/e/endBatch").at("code") == "NO_BATCH_OPEN");
  CHECK(fx.last_status == 409);
}

TEST_CASE("task rows: submit echo, state queries, withdrawal") {
  ServiceFixture fx;
  fx.post("/v1/e", {{"strategy", "fifo-round_robin"}});
  fx.post("/v1/e/DAG/vertices", json::array({{{"id", "C"}}}));

  json body = task_body("C", 1500, 1.0);
  body["inputFiles"] = json::array({{{"path", "/in"}, {"sizeBytes", 42}}});
  const json granted = fx.post("/v1/e/task/t3", body);
  CHECK(fx.last_status == 200);
  CHECK(granted.at("cpus").get<double>() == doctest::Approx(1.0));
  CHECK(granted.at("memoryBytes") == (1 << 20));
  CHECK(granted.at("runtimeMs") == 1500);  // echo of the request

  CHECK(fx.post("/v1/e/task/t3", body).at("code") == "DUPLICATE_TASK");
  CHECK(fx.last_status == 409);
  CHECK(fx.post("/v1/e/task/t4", task_body("GHOST", 1)).at("code") ==
        "UNKNOWN_ABSTRACT_VERTEX");
  CHECK(fx.last_status == 400);
  fx.get("/v1/e/task/unknown");
  CHECK(fx.last_status == 404);

  // read-your-writes: the submission is immediately observable
  const json state = fx.get("/v1/e/task/t3");
  CHECK(state.at("state") == "RUNNING");
  CHECK(state.at("node") == "n1");
  CHECK(state.at("submittedAt") == 0);

  // a running task cannot be withdrawn
  CHECK(fx.del("/v1/e/task/t3").at("code") == "TASK_NOT_WITHDRAWABLE");
  CHECK(fx.last_status == 409);

  // fill the cluster so the next submission queues, then withdraw it
  fx.post("/v1/e/task/t5", task_body("C", 9000));
  fx.post("/v1/e/task/t6", task_body("C", 9000));
  CHECK(fx.get("/v1/e/task/t6").at("state") == "QUEUED");
  const json withdrawn = fx.del("/v1/e/task/t6");
  CHECK(fx.last_status == 200);
  CHECK(withdrawn.at("state") == "WITHDRAWN");
  CHECK(fx.get("/v1/e/task/t6").at("state") == "WITHDRAWN");

  // missing runtime estimate is granted as zero
  const json no_estimate = fx.post("/v1/e/task/t7",
                                   {{"abstractId", "C"},
                                    {"cpus", 0.5},
                                    {"memoryBytes", 1024}});
  CHECK(fx.last_status == 200);
  CHECK(no_estimate.at("runtimeMs") == 0);
}

TEST_CASE("malformed bodies come back as BAD_REQUEST, not crashes") {
  ServiceFixture fx;
  fx.post("/v1/e", {{"strategy", "fifo-round_robin"}});

  auto res = fx.raw.Post("/v1/e/DAG/vertices", "{not json",
                         "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body).at("code") == "BAD_REQUEST");

  res = fx.raw.Post("/v1/e/task/t1", R"({"cpus": "many"})",
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = fx.raw.Post("/v1/e/task/t1",
                    R"({"abstractId":"V","cpus":-1,"memoryBytes":1})",
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
}

TEST_CASE("the API description document is served and self-consistent") {
  ServiceFixture fx;
  const json doc = fx.get("/v1/openapi.json");
  CHECK(fx.last_status == 200);
  CHECK(doc.at("openapi") == "3.0.3");
  const auto& paths = doc.at("paths");
  CHECK(paths.size() == 6);  // 11 operations over 6 path templates
  std::size_t operations = 0;
  for (const auto& [path, item] : paths.items()) {
    operations += item.size();
  }
  CHECK(operations == 11);
  CHECK(paths.at("/{version}/{execution}/task/{id}").contains("post"));
  CHECK(paths.at("/{version}/{execution}/task/{id}").contains("get"));
  CHECK(paths.at("/{version}/{execution}/task/{id}").contains("delete"));
}

TEST_CASE("the typed HTTP client surfaces service errors as interface codes") {
  ServiceFixture fx;
  HttpClient client("http://127.0.0.1:" + std::to_string(fx.port));
  client.create_execution("e", "rank_fifo-fair", 0);
  bool threw = false;
  try {
    client.create_execution("e", "rank_fifo-fair", 0);
  } catch (const Error& error) {
    threw = true;
    CHECK(error.code() == Errc::DuplicateExecution);
  }
  CHECK(threw);

  HttpClient dead("http://127.0.0.1:1");  // nothing listens there
  bool unreachable = false;
  try {
    dead.create_execution("e", "fifo-fair", 0);
  } catch (const Error& error) {
    unreachable = true;
    CHECK(error.code() == Errc::SchedulerUnreachable);
  }
  CHECK(unreachable);
}

TEST_CASE("a full replay over real HTTP matches the in-process makespans") {
  ServiceFixture fx;
  HttpClient client("http://127.0.0.1:" + std::to_string(fx.port));

  RunConfig config;
  config.strategy = "rank_min-round_robin";
  const RunResult fast = run_trace(client, diamond_trace(), config);
  CHECK(fast.makespan_ms == 4000);
  CHECK(fast.finished == 6);

  config.strategy = "fifo-round_robin";
  const RunResult slow = run_trace(client, diamond_trace(), config);
  CHECK(slow.makespan_ms == 5000);
  CHECK(slow.finished == 6);
}
