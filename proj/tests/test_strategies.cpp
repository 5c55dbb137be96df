#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cws/error.hpp"
#include "cws/rng.hpp"
#include "cws/strategies.hpp"

using namespace cws;

namespace {

CandidateTask make_task(TaskId id, std::uint64_t seq, std::int64_t size,
                        std::int64_t rank, std::int64_t cpus_milli = 1000,
                        std::int64_t memory = 1 << 20) {
  CandidateTask t;
  t.task_id = std::move(id);
  t.submission_seq = seq;
  t.input_size_bytes = size;
  t.rank = rank;
  t.cpus_milli = cpus_milli;
  t.memory_bytes = memory;
  return t;
}

NodeView make_node(NodeId id, std::int64_t total_cpus_milli,
                   std::int64_t total_memory, std::int64_t alloc_cpus = 0,
                   std::int64_t alloc_memory = 0) {
  NodeView n;
  n.id = std::move(id);
  n.total_cpus_milli = total_cpus_milli;
  n.total_memory_bytes = total_memory;
  n.allocated_cpus_milli = alloc_cpus;
  n.allocated_memory_bytes = alloc_memory;
  return n;
}

std::vector<TaskId> ids_of(const std::vector<CandidateTask>& tasks) {
  std::vector<TaskId> ids;
  for (const auto& t : tasks) ids.push_back(t.task_id);
  return ids;
}

}  // namespace

TEST_CASE("exactly 22 strategy names parse and round-trip") {
  const auto names = StrategyName::all_names();
  REQUIRE(names.size() == 22);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == 22);
  CHECK(names.back() == "baseline_default");

  for (const auto& name : names) {
    const StrategyName parsed = StrategyName::parse(name);
    CHECK(parsed.to_string() == name);
  }

  CHECK(StrategyName::parse("baseline_default").baseline);
  const StrategyName rank_min_rr = StrategyName::parse("rank_min-round_robin");
  CHECK_FALSE(rank_min_rr.baseline);
  CHECK(rank_min_rr.prioritization == Prioritization::RankMin);
  CHECK(rank_min_rr.assignment == Assignment::RoundRobin);
  const StrategyName size_desc_fair = StrategyName::parse("size_desc-fair");
  CHECK(size_desc_fair.prioritization == Prioritization::SizeDesc);
  CHECK(size_desc_fair.assignment == Assignment::Fair);

  for (const char* bad :
       {"", "fifo", "fifo-", "-fair", "rank-round_robin", "FIFO-ROUND_ROBIN",
        "fifo-round_robin-extra", "baseline", "baseline_default-fair",
        "fifo_round_robin"}) {
    CHECK_THROWS_AS(StrategyName::parse(bad), Error);
  }
}

TEST_CASE("rank_fifo orders the revealed second step as t3, t4, t2") {
  std::vector<CandidateTask> pending = {
      make_task("t2", 1, 0, 1),
      make_task("t3", 2, 0, 2),
      make_task("t4", 3, 0, 2),
  };
  Rng rng(7);
  const auto ordered = prioritize(pending, Prioritization::RankFifo, rng);
  CHECK(ids_of(ordered) == std::vector<TaskId>{"t3", "t4", "t2"});
}

TEST_CASE("size-based orderings sort by declared input bytes") {
  std::vector<CandidateTask> pending = {
      make_task("a", 0, 10, 0),
      make_task("b", 1, 30, 0),
      make_task("c", 2, 20, 0),
  };
  Rng rng(7);
  CHECK(ids_of(prioritize(pending, Prioritization::SizeDesc, rng)) ==
        std::vector<TaskId>{"b", "c", "a"});
  CHECK(ids_of(prioritize(pending, Prioritization::SizeAsc, rng)) ==
        std::vector<TaskId>{"a", "c", "b"});

  // ties fall back to submission order
  std::vector<CandidateTask> tied = {
      make_task("late", 5, 42, 0),
      make_task("early", 2, 42, 0),
  };
  CHECK(ids_of(prioritize(tied, Prioritization::SizeDesc, rng)) ==
        std::vector<TaskId>{"early", "late"});
}

TEST_CASE("rank tie-breaks: rank_min prefers larger input, rank_max smaller") {
  std::vector<CandidateTask> pending = {
      make_task("small", 0, 10, 2),
      make_task("large", 1, 99, 2),
      make_task("deep", 2, 1, 5),
  };
  Rng rng(7);
  CHECK(ids_of(prioritize(pending, Prioritization::RankMin, rng)) ==
        std::vector<TaskId>{"deep", "large", "small"});
  CHECK(ids_of(prioritize(pending, Prioritization::RankMax, rng)) ==
        std::vector<TaskId>{"deep", "small", "large"});

  // equal rank and equal size: submission order decides
  std::vector<CandidateTask> tied = {
      make_task("second", 4, 7, 1),
      make_task("first", 3, 7, 1),
  };
  CHECK(ids_of(prioritize(tied, Prioritization::RankMin, rng)) ==
        std::vector<TaskId>{"first", "second"});
  CHECK(ids_of(prioritize(tied, Prioritization::RankMax, rng)) ==
        std::vector<TaskId>{"first", "second"});
}

TEST_CASE("fifo is submission order; empty input stays empty") {
  std::vector<CandidateTask> pending = {
      make_task("z", 9, 0, 0),
      make_task("a", 1, 0, 9),
  };
  Rng rng(7);
  CHECK(ids_of(prioritize(pending, Prioritization::Fifo, rng)) ==
        std::vector<TaskId>{"a", "z"});
  CHECK(prioritize({}, Prioritization::Fifo, rng).empty());
  CHECK(prioritize({}, Prioritization::Random, rng).empty());
}

TEST_CASE("every prioritization permutes its input") {
  Rng source(0x5EED);
  for (int round = 0; round < 50; ++round) {
    std::vector<CandidateTask> pending;
    const std::size_t n = source.uniform_below(10);
    for (std::size_t i = 0; i < n; ++i) {
      pending.push_back(make_task(
          "t" + std::to_string(i), i,
          static_cast<std::int64_t>(source.uniform_below(100)),
          static_cast<std::int64_t>(source.uniform_below(5))));
    }
    auto expected = ids_of(pending);
    std::sort(expected.begin(), expected.end());
    for (Prioritization p :
         {Prioritization::Fifo, Prioritization::Random,
          Prioritization::SizeDesc, Prioritization::SizeAsc,
          Prioritization::RankFifo, Prioritization::RankMin,
          Prioritization::RankMax}) {
      Rng rng(round);
      auto actual = ids_of(prioritize(pending, p, rng));
      std::sort(actual.begin(), actual.end());
      REQUIRE(actual == expected);
    }
  }
}

TEST_CASE("prioritize is deterministic for a fixed seed") {
  std::vector<CandidateTask> pending;
  for (int i = 0; i < 20; ++i) {
    pending.push_back(make_task("t" + std::to_string(i), i, i * 3 % 7, i % 4));
  }
  Rng a(42), b(42), c(43);
  const auto first = ids_of(prioritize(pending, Prioritization::Random, a));
  const auto second = ids_of(prioritize(pending, Prioritization::Random, b));
  const auto third = ids_of(prioritize(pending, Prioritization::Random, c));
  CHECK(first == second);
  CHECK(first != third);  // astronomically unlikely to collide on 20!
}

TEST_CASE("rank strategies emit non-increasing rank sequences") {
  Rng source(0xBEEF);
  std::vector<CandidateTask> pending;
  for (int i = 0; i < 30; ++i) {
    pending.push_back(make_task(
        "t" + std::to_string(i), i,
        static_cast<std::int64_t>(source.uniform_below(50)),
        static_cast<std::int64_t>(source.uniform_below(6))));
  }
  for (Prioritization p : {Prioritization::RankFifo, Prioritization::RankMin,
                           Prioritization::RankMax}) {
    Rng rng(1);
    const auto ordered = prioritize(pending, p, rng);
    for (std::size_t i = 1; i < ordered.size(); ++i) {
      REQUIRE(ordered[i - 1].rank >= ordered[i].rank);
    }
  }
}

TEST_CASE("round_robin rotates across identical free nodes") {
  std::vector<NodeView> nodes = {
      make_node("node1", 4000, 1 << 30),
      make_node("node2", 4000, 1 << 30),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 1000, 1 << 20);
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  CHECK(assign(task, nodes, Assignment::RoundRobin, cursor, rng) == "node1");
  CHECK(assign(task, nodes, Assignment::RoundRobin, cursor, rng) == "node2");
  CHECK(assign(task, nodes, Assignment::RoundRobin, cursor, rng) == "node1");
}

TEST_CASE("round_robin deals k*m identical tasks m to each of k nodes") {
  constexpr int k = 3, m = 4;
  std::vector<NodeView> nodes;
  for (int i = 0; i < k; ++i) {
    nodes.push_back(make_node("n" + std::to_string(i), 8000, 1LL << 30));
  }
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  std::map<NodeId, int> counts;
  for (int i = 0; i < k * m; ++i) {
    const CandidateTask task = make_task("t", i, 0, 0, 1000, 1 << 20);
    const auto node = assign(task, nodes, Assignment::RoundRobin, cursor, rng);
    REQUIRE(node.has_value());
    ++counts[*node];
    for (auto& n : nodes) {
      if (n.id == *node) {
        n.allocated_cpus_milli += task.cpus_milli;
        n.allocated_memory_bytes += task.memory_bytes;
      }
    }
  }
  for (const auto& [id, count] : counts) CHECK(count == m);
  CHECK(counts.size() == k);
}

TEST_CASE("round_robin skips nodes that do not fit without losing rotation") {
  std::vector<NodeView> nodes = {
      make_node("full", 1000, 1 << 30, 1000, 0),  // no free cpu
      make_node("open", 4000, 1 << 30),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 500, 1 << 10);
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  CHECK(assign(task, nodes, Assignment::RoundRobin, cursor, rng) == "open");
}

TEST_CASE("fair picks the lower post-assignment utilization") {
  // after placing a 2-core task: 8/10 = 0.8 on hot vs 3/10 = 0.3 on cold
  std::vector<NodeView> nodes = {
      make_node("hot", 10000, 1LL << 40, 6000, 0),
      make_node("cold", 10000, 1LL << 40, 1000, 0),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 2000, 1 << 20);
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  CHECK(assign(task, nodes, Assignment::Fair, cursor, rng) == "cold");
}

TEST_CASE("fair utilization takes the max over cpu and memory fractions") {
  // cpu fraction would prefer ram-starved; its memory fraction disqualifies it
  std::vector<NodeView> nodes = {
      make_node("ram-starved", 10000, 1000, 1000, 900),
      make_node("balanced", 10000, 1000, 3000, 100),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 1000, 100);
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  // ram-starved: max(0.2, 1.0) = 1.0; balanced: max(0.4, 0.2) = 0.4
  CHECK(assign(task, nodes, Assignment::Fair, cursor, rng) == "balanced");
}

TEST_CASE("fair breaks exact utilization ties by lowest node id") {
  std::vector<NodeView> nodes = {
      make_node("b", 4000, 1000),
      make_node("a", 4000, 1000),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 2000, 500);
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  CHECK(assign(task, nodes, Assignment::Fair, cursor, rng) == "a");
}

TEST_CASE("no assignment strategy ever violates feasibility") {
  Rng source(0xFEA51B1E);
  for (int round = 0; round < 200; ++round) {
    std::vector<NodeView> nodes;
    const std::size_t n = 1 + source.uniform_below(5);
    for (std::size_t i = 0; i < n; ++i) {
      auto node = make_node("n" + std::to_string(i),
                            1000 * (1 + source.uniform_below(8)),
                            1 + source.uniform_below(1 << 20));
      node.allocated_cpus_milli =
          source.uniform_below(node.total_cpus_milli + 1);
      node.allocated_memory_bytes =
          source.uniform_below(node.total_memory_bytes + 1);
      node.online = source.uniform_below(10) > 0;
      nodes.push_back(node);
    }
    const CandidateTask task =
        make_task("t", 0, 0, 0, 1 + source.uniform_below(8000),
                  1 + source.uniform_below(1 << 20));
    for (Assignment a :
         {Assignment::RoundRobin, Assignment::Random, Assignment::Fair}) {
      RoundRobinCursor cursor = source.uniform_below(n);
      Rng rng(round);
      const auto chosen = assign(task, nodes, a, cursor, rng);
      if (chosen) {
        const auto it = std::find_if(nodes.begin(), nodes.end(),
                                     [&](const NodeView& nv) {
                                       return nv.id == *chosen;
                                     });
        REQUIRE(it != nodes.end());
        REQUIRE(it->fits(task));
      } else {
        for (const auto& nv : nodes) REQUIRE_FALSE(nv.fits(task));
      }
    }
  }
}

TEST_CASE("infeasible everywhere returns no node") {
  std::vector<NodeView> nodes = {
      make_node("n1", 2000, 1 << 30),
      make_node("n2", 2000, 1 << 30),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 4000, 1 << 10);
  RoundRobinCursor cursor = 0;
  Rng rng(7);
  CHECK_FALSE(assign(task, nodes, Assignment::RoundRobin, cursor, rng));
  CHECK_FALSE(assign(task, nodes, Assignment::Random, cursor, rng));
  CHECK_FALSE(assign(task, nodes, Assignment::Fair, cursor, rng));
}

TEST_CASE("random assignment only ever picks feasible nodes") {
  std::vector<NodeView> nodes = {
      make_node("tiny", 500, 1 << 30),
      make_node("n1", 4000, 1 << 30),
      make_node("n2", 4000, 1 << 30),
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 1000, 1 << 10);
  std::set<NodeId> seen;
  Rng rng(11);
  RoundRobinCursor cursor = 0;
  for (int i = 0; i < 100; ++i) {
    const auto chosen = assign(task, nodes, Assignment::Random, cursor, rng);
    REQUIRE(chosen.has_value());
    CHECK(*chosen != "tiny");
    seen.insert(*chosen);
  }
  CHECK(seen.size() == 2);  // both feasible nodes get traffic
}

TEST_CASE("baseline placement spreads by allocated-cpu fraction") {
  std::vector<NodeView> nodes = {
      make_node("n1", 4000, 1 << 30, 2000, 0),  // 50% allocated
      make_node("n2", 4000, 1 << 30, 1000, 0),  // 25% allocated
  };
  const CandidateTask task = make_task("t", 0, 0, 0, 1000, 1 << 10);
  CHECK(baseline_pick(task, nodes) == "n2");

  // ties by node id
  std::vector<NodeView> even = {
      make_node("n2", 4000, 1 << 30),
      make_node("n1", 4000, 1 << 30),
  };
  CHECK(baseline_pick(task, even) == "n1");
}

TEST_CASE("baseline_assign never over-allocates while draining a queue") {
  std::vector<NodeView> nodes = {
      make_node("n1", 2000, 3000),
      make_node("n2", 2000, 3000),
  };
  std::vector<CandidateTask> pending;
  for (int i = 0; i < 6; ++i) {
    pending.push_back(make_task("t" + std::to_string(i), i, 0, 0, 1000, 1000));
  }
  const auto placed = baseline_assign(pending, nodes);
  // capacity: 2 cpus x 2 nodes = 4 concurrent unit tasks at most
  CHECK(placed.size() == 4);
  std::map<NodeId, std::pair<std::int64_t, std::int64_t>> used;
  for (const auto& [task_id, node_id] : placed) {
    used[node_id].first += 1000;
    used[node_id].second += 1000;
  }
  for (const auto& [node_id, totals] : used) {
    CHECK(totals.first <= 2000);
    CHECK(totals.second <= 3000);
  }
}
