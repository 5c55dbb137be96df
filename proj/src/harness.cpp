#include "cws/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <nlohmann/json.hpp>

#include "cws/client.hpp"
#include "cws/driver.hpp"
#include "cws/engine.hpp"
#include "cws/error.hpp"

namespace cws {

namespace {

using nlohmann::ordered_json;

std::string sanitize_filename(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += ok ? c : '-';
  }
  if (out.empty()) out = "trace";
  return out;
}

std::string fmt_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::BadRequest, "cannot write file: " + path);
  }
  out << content;
}

}  // namespace

std::string RunRecord::to_json_line() const {
  ordered_json doc;
  doc["trace"] = trace;
  doc["strategy"] = strategy;
  doc["seed"] = seed;
  doc["repetition"] = repetition;
  doc["makespanMs"] = makespan_ms;
  doc["taskCount"] = task_count;
  doc["decisionsLog"] = decisions_log;
  return doc.dump();
}

std::vector<RunRecord> sweep(const SweepRequest& request) {
  namespace fs = std::filesystem;
  const bool writing = !request.out_dir.empty();
  if (writing) {
    fs::create_directories(fs::path(request.out_dir) / "logs");
  }

  std::vector<RunRecord> records;
  for (const auto& trace : request.traces) {
    for (const auto& strategy : request.strategies) {
      for (int rep = 0; rep < request.repetitions; ++rep) {
        // every run gets a fresh scheduler and simulated cluster
        SchedulerEngine engine(request.cluster);
        InProcessClient client(engine);
        RunConfig config;
        config.execution_id = "run";
        config.strategy = strategy;
        config.seed = request.base_seed + static_cast<std::uint64_t>(rep);
        config.batch_size = request.batch_size;
        RunResult result = run_trace(client, trace, config);

        RunRecord record;
        record.trace = trace.name;
        record.strategy = strategy;
        record.seed = config.seed;
        record.repetition = rep;
        record.makespan_ms = result.makespan_ms;
        record.task_count = trace.physical_tasks.size();
        record.log_text = engine.decision_log_jsonl(result.execution_id);
        if (writing) {
          const std::string rel = "logs/" + sanitize_filename(trace.name) +
                                  "-" + sanitize_filename(strategy) + "-r" +
                                  std::to_string(rep) + ".jsonl";
          write_text_file((fs::path(request.out_dir) / rel).string(),
                          record.log_text);
          record.decisions_log = rel;
        }
        records.push_back(std::move(record));
      }
    }
  }

  if (writing) {
    write_text_file(
        (fs::path(request.out_dir) / "records.jsonl").string(),
        records_to_jsonl(records));
  }
  return records;
}

std::string records_to_jsonl(const std::vector<RunRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += record.to_json_line();
    out += '\n';
  }
  return out;
}

std::vector<StrategyAggregate> aggregate(
    const std::vector<RunRecord>& records) {
  // group makespans per (trace, strategy), preserving first-seen order
  std::vector<std::pair<std::string, std::string>> group_order;
  std::map<std::pair<std::string, std::string>, std::vector<std::int64_t>>
      groups;
  std::vector<std::string> trace_order;
  for (const auto& record : records) {
    const auto key = std::make_pair(record.trace, record.strategy);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) group_order.push_back(key);
    it->second.push_back(record.makespan_ms);
    if (std::find(trace_order.begin(), trace_order.end(), record.trace) ==
        trace_order.end()) {
      trace_order.push_back(record.trace);
    }
  }

  auto median_of = [](std::vector<std::int64_t> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];  // lower middle for even counts
  };

  std::map<std::string, std::int64_t> baseline_median;
  std::map<std::string, std::int64_t> baseline_min;
  for (const auto& trace : trace_order) {
    auto it = groups.find({trace, "baseline_default"});
    if (it == groups.end() || it->second.empty()) {
      throw Error(Errc::MissingBaseline,
                  "trace '" + trace + "' has no baseline_default runs");
    }
    baseline_median[trace] = median_of(it->second);
    baseline_min[trace] =
        *std::min_element(it->second.begin(), it->second.end());
  }

  std::vector<StrategyAggregate> aggregates;
  for (const auto& [trace, strategy] : group_order) {
    const auto& makespans = groups.at({trace, strategy});
    StrategyAggregate agg;
    agg.trace = trace;
    agg.strategy = strategy;
    agg.median_makespan_ms = median_of(makespans);
    agg.min_makespan_ms =
        *std::min_element(makespans.begin(), makespans.end());

    double mean = 0.0;
    for (auto v : makespans) mean += static_cast<double>(v);
    mean /= static_cast<double>(makespans.size());
    double variance = 0.0;
    for (auto v : makespans) {
      const double d = static_cast<double>(v) - mean;
      variance += d * d;
    }
    variance /= static_cast<double>(makespans.size());
    agg.stddev_ms = std::sqrt(variance);

    const double base_med =
        static_cast<double>(baseline_median.at(trace));
    const double base_min = static_cast<double>(baseline_min.at(trace));
    agg.median_change_vs_baseline_pct =
        base_med == 0.0 ? 0.0
                        : 100.0 *
                              (static_cast<double>(agg.median_makespan_ms) -
                               base_med) /
                              base_med;
    std::size_t below_median = 0;
    std::size_t below_min = 0;
    for (auto v : makespans) {
      if (static_cast<double>(v) < base_med) ++below_median;
      if (static_cast<double>(v) < base_min) ++below_min;
    }
    agg.better_than_baseline_median_pct =
        100.0 * static_cast<double>(below_median) /
        static_cast<double>(makespans.size());
    agg.better_than_baseline_min_pct =
        100.0 * static_cast<double>(below_min) /
        static_cast<double>(makespans.size());
    aggregates.push_back(std::move(agg));
  }
  return aggregates;
}

std::string aggregates_to_csv(
    const std::vector<StrategyAggregate>& aggregates) {
  std::string out =
      "trace,strategy,medianMakespanMs,minMakespanMs,stddevMs,"
      "medianChangeVsBaselinePct,betterThanBaselineMedianPct,"
      "betterThanBaselineMinPct\n";
  for (const auto& a : aggregates) {
    out += a.trace + "," + a.strategy + "," +
           std::to_string(a.median_makespan_ms) + "," +
           std::to_string(a.min_makespan_ms) + "," + fmt_double(a.stddev_ms) +
           "," + fmt_double(a.median_change_vs_baseline_pct) + "," +
           fmt_double(a.better_than_baseline_median_pct) + "," +
           fmt_double(a.better_than_baseline_min_pct) + "\n";
  }
  return out;
}

std::string aggregates_to_json(
    const std::vector<StrategyAggregate>& aggregates) {
  ordered_json arr = ordered_json::array();
  for (const auto& a : aggregates) {
    ordered_json doc;
    doc["trace"] = a.trace;
    doc["strategy"] = a.strategy;
    doc["medianMakespanMs"] = a.median_makespan_ms;
    doc["minMakespanMs"] = a.min_makespan_ms;
    doc["stddevMs"] = a.stddev_ms;
    doc["medianChangeVsBaselinePct"] = a.median_change_vs_baseline_pct;
    doc["betterThanBaselineMedianPct"] = a.better_than_baseline_median_pct;
    doc["betterThanBaselineMinPct"] = a.better_than_baseline_min_pct;
    arr.push_back(std::move(doc));
  }
  return arr.dump(2);
}

std::vector<StrategyAggregate> aggregates_from_json(const std::string& text) {
  std::vector<StrategyAggregate> aggregates;
  const auto arr = nlohmann::json::parse(text);
  for (const auto& doc : arr) {
    StrategyAggregate a;
    a.trace = doc.at("trace").get<std::string>();
    a.strategy = doc.at("strategy").get<std::string>();
    a.median_makespan_ms = doc.at("medianMakespanMs").get<std::int64_t>();
    a.min_makespan_ms = doc.at("minMakespanMs").get<std::int64_t>();
    a.stddev_ms = doc.at("stddevMs").get<double>();
    a.median_change_vs_baseline_pct =
        doc.at("medianChangeVsBaselinePct").get<double>();
    a.better_than_baseline_median_pct =
        doc.at("betterThanBaselineMedianPct").get<double>();
    a.better_than_baseline_min_pct =
        doc.at("betterThanBaselineMinPct").get<double>();
    aggregates.push_back(std::move(a));
  }
  return aggregates;
}

std::string aggregates_to_markdown(
    const std::vector<StrategyAggregate>& aggregates) {
  // one table per trace, strategies as columns
  std::vector<std::string> trace_order;
  for (const auto& a : aggregates) {
    if (std::find(trace_order.begin(), trace_order.end(), a.trace) ==
        trace_order.end()) {
      trace_order.push_back(a.trace);
    }
  }
  std::string out;
  for (const auto& trace : trace_order) {
    std::vector<const StrategyAggregate*> cols;
    for (const auto& a : aggregates) {
      if (a.trace == trace) cols.push_back(&a);
    }
    out += "### " + trace + "\n\n";
    out += "| metric |";
    for (const auto* a : cols) out += " " + a->strategy + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < cols.size(); ++i) out += "---|";
    out += "\n";

    const std::pair<std::string,
                    std::function<std::string(const StrategyAggregate&)>>
        rows[] = {
            {"medianMakespanMs",
             [](const StrategyAggregate& a) {
               return std::to_string(a.median_makespan_ms);
             }},
            {"minMakespanMs",
             [](const StrategyAggregate& a) {
               return std::to_string(a.min_makespan_ms);
             }},
            {"stddevMs",
             [](const StrategyAggregate& a) { return fmt_double(a.stddev_ms); }},
            {"medianChangeVsBaselinePct",
             [](const StrategyAggregate& a) {
               return fmt_double(a.median_change_vs_baseline_pct);
             }},
            {"betterThanBaselineMedianPct",
             [](const StrategyAggregate& a) {
               return fmt_double(a.better_than_baseline_median_pct);
             }},
            {"betterThanBaselineMinPct",
             [](const StrategyAggregate& a) {
               return fmt_double(a.better_than_baseline_min_pct);
             }},
        };
    for (const auto& [label, render] : rows) {
      out += "| " + label + " |";
      for (const auto* a : cols) out += " " + render(*a) + " |";
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace cws
