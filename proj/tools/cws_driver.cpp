#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cws/client.hpp"
#include "cws/driver.hpp"
#include "cws/engine.hpp"
#include "cws/http_client.hpp"
#include "cws/tracegen.hpp"

#include "file_util.hpp"

namespace {

using cli_util::read_file;
using cli_util::write_file;

int cmd_run(const std::string& trace_path, const std::string& strategy,
            const std::string& cluster_path, const std::string& endpoint,
            std::size_t batch_size, std::uint64_t seed,
            const std::string& decisions_out) {
  const auto trace = cws::WorkflowTrace::from_json_text(read_file(trace_path));

  cws::RunConfig config;
  config.strategy = strategy;
  config.seed = seed;
  config.batch_size = batch_size;

  std::unique_ptr<cws::SchedulerEngine> engine;
  std::unique_ptr<cws::SchedulerClient> client;
  if (!cluster_path.empty()) {
    engine = std::make_unique<cws::SchedulerEngine>(
        cws::ClusterConfig::from_json_text(read_file(cluster_path)));
    client = std::make_unique<cws::InProcessClient>(*engine);
  } else {
    client = std::make_unique<cws::HttpClient>(endpoint);
    config.poll_sleep_ms = 50;  // remote polling cadence
    config.stall_rounds = 200;  // tolerate slow remote scheduling
  }

  const cws::RunResult result = cws::run_trace(*client, trace, config);

  if (!decisions_out.empty()) {
    write_file(decisions_out, engine->decision_log_jsonl(result.execution_id));
  }

  nlohmann::ordered_json out;
  out["execution"] = result.execution_id;
  out["trace"] = trace.name;
  out["strategy"] = strategy;
  out["makespanMs"] = result.makespan_ms;
  out["taskCount"] = trace.physical_tasks.size();
  out["finished"] = result.finished;
  out["failed"] = result.failed;
  out["withdrawn"] = result.withdrawn;
  out["cancelledBeforeSubmit"] = result.cancelled_before_submit;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_validate(const std::string& trace_path) {
  const auto trace = cws::WorkflowTrace::from_json_text(read_file(trace_path));
  const auto violations = cws::validate_trace(trace);
  for (const auto& v : violations) std::cout << v << "\n";
  return violations.empty() ? 0 : 1;
}

int cmd_gen(const std::string& kind, const std::string& out_path,
            std::uint64_t seed, std::size_t width, std::size_t length,
            std::int64_t runtime_ms) {
  cws::WorkflowTrace trace;
  if (kind == "diamond") {
    trace = cws::diamond_trace();
  } else if (kind == "chain") {
    trace = cws::chain_trace(length, runtime_ms);
  } else if (kind == "fork-join") {
    trace = cws::fork_join_trace(width, runtime_ms);
  } else if (kind == "layered") {
    cws::Rng rng(seed);
    trace = cws::layered_random_trace(rng, cws::LayeredTraceParams{},
                                      "layered-" + std::to_string(seed));
  } else if (kind == "critical-path") {
    cws::Rng rng(seed);
    trace = cws::critical_path_trace(rng, cws::CriticalPathParams{},
                                     "critical-path-" + std::to_string(seed));
  } else {
    std::cerr << "unknown trace kind: " << kind << "\n";
    return 2;
  }
  write_file(out_path, trace.to_json_text());
  std::cerr << "wrote " << trace.physical_tasks.size() << "-task trace '"
            << trace.name << "' to " << out_path << "\n";
  return 0;
}

int cmd_gen_cluster(const std::string& kind, const std::string& out_path) {
  cws::ClusterConfig config;
  if (kind == "two-slot") {
    config = cws::two_slot_cluster();
  } else if (kind == "fuzz") {
    config = cws::fuzz_cluster();
  } else if (kind == "narrow") {
    config = cws::narrow_cluster();
  } else {
    std::cerr << "unknown cluster kind: " << kind << "\n";
    return 2;
  }
  write_file(out_path, config.to_json_text());
  std::cerr << "wrote cluster '" << kind << "' to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workflow replay driver for the scheduler interface"};
  app.require_subcommand(1);

  // -- run ----------------------------------------------------------------
  auto* run = app.add_subcommand(
      "run", "replay a trace against a scheduler and report the makespan");
  std::string trace_path, strategy, cluster_path, endpoint, decisions_out;
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  run->add_option("--trace", trace_path, "workflow trace JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--strategy", strategy,
                  "scheduling strategy, e.g. rank_min-round_robin")
      ->required();
  auto* cluster_opt =
      run->add_option("--cluster", cluster_path,
                      "cluster config JSON (runs an in-process scheduler)")
          ->check(CLI::ExistingFile);
  auto* endpoint_opt =
      run->add_option("--endpoint", endpoint,
                      "base URL of a running scheduler service")
          ->excludes(cluster_opt);
  cluster_opt->excludes(endpoint_opt);
  run->add_option("--batch-size", batch_size,
                  "max tasks per submission batch (0 = unlimited)");
  run->add_option("--seed", seed, "seed forwarded to the execution");
  run->add_option("--decisions-out", decisions_out,
                  "write the decision log here (in-process mode only)");

  // -- validate -------------------------------------------------------------
  auto* validate =
      app.add_subcommand("validate", "check a trace against its invariants");
  std::string validate_path;
  validate->add_option("--trace", validate_path, "workflow trace JSON")
      ->required()
      ->check(CLI::ExistingFile);

  // -- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "emit a synthetic workflow trace");
  std::string gen_kind, gen_out;
  std::uint64_t gen_seed = 0;
  std::size_t gen_width = 8, gen_length = 10;
  std::int64_t gen_runtime = 1000;
  gen->add_option("--kind", gen_kind,
                  "diamond | chain | fork-join | layered | critical-path")
      ->required();
  gen->add_option("--out", gen_out, "output path")->required();
  gen->add_option("--seed", gen_seed, "seed for randomized kinds");
  gen->add_option("--width", gen_width, "fork-join width");
  gen->add_option("--length", gen_length, "chain length");
  gen->add_option("--runtime-ms", gen_runtime, "per-task runtime");

  // -- gen-cluster -----------------------------------------------------------
  auto* gen_cluster =
      app.add_subcommand("gen-cluster", "emit a canned cluster config");
  std::string cluster_kind, cluster_out;
  gen_cluster->add_option("--kind", cluster_kind, "two-slot | fuzz | narrow")
      ->required();
  gen_cluster->add_option("--out", cluster_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (cluster_path.empty() == endpoint.empty()) {
        std::cerr << "exactly one of --cluster / --endpoint is required\n";
        return 2;
      }
      if (!decisions_out.empty() && cluster_path.empty()) {
        std::cerr << "--decisions-out requires --cluster (in-process mode)\n";
        return 2;
      }
      return cmd_run(trace_path, strategy, cluster_path, endpoint, batch_size,
                     seed, decisions_out);
    }
    if (validate->parsed()) return cmd_validate(validate_path);
    if (gen->parsed()) {
      return cmd_gen(gen_kind, gen_out, gen_seed, gen_width, gen_length,
                     gen_runtime);
    }
    if (gen_cluster->parsed()) return cmd_gen_cluster(cluster_kind, cluster_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
