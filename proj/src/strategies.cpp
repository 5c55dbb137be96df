#include "cws/strategies.hpp"

#include <algorithm>
#include <deque>

#include "cws/error.hpp"

namespace cws {

namespace {

const std::pair<Prioritization, const char*> kPrioritizations[] = {
    {Prioritization::Fifo, "fifo"},
    {Prioritization::Random, "random"},
    {Prioritization::SizeDesc, "size_desc"},
    {Prioritization::SizeAsc, "size_asc"},
    {Prioritization::RankFifo, "rank_fifo"},
    {Prioritization::RankMin, "rank_min"},
    {Prioritization::RankMax, "rank_max"},
};

const std::pair<Assignment, const char*> kAssignments[] = {
    {Assignment::RoundRobin, "round_robin"},
    {Assignment::Random, "random"},
    {Assignment::Fair, "fair"},
};

constexpr const char* kBaselineName = "baseline_default";

}  // namespace

const char* prioritization_name(Prioritization p) {
  for (const auto& [value, name] : kPrioritizations) {
    if (value == p) return name;
  }
  return "?";
}

const char* assignment_name(Assignment a) {
  for (const auto& [value, name] : kAssignments) {
    if (value == a) return name;
  }
  return "?";
}

StrategyName StrategyName::parse(const std::string& text) {
  if (text == kBaselineName) {
    StrategyName s;
    s.baseline = true;
    return s;
  }
  // Tokens never contain '-', so the single separator is unambiguous.
  auto dash = text.find('-');
  if (dash != std::string::npos && text.find('-', dash + 1) == std::string::npos) {
    const std::string prio_token = text.substr(0, dash);
    const std::string assign_token = text.substr(dash + 1);
    for (const auto& [prio, prio_name] : kPrioritizations) {
      if (prio_token != prio_name) continue;
      for (const auto& [assign, assign_name] : kAssignments) {
        if (assign_token != assign_name) continue;
        StrategyName s;
        s.prioritization = prio;
        s.assignment = assign;
        return s;
      }
    }
  }
  throw Error(Errc::UnknownStrategy, "unknown strategy '" + text + "'");
}

std::string StrategyName::to_string() const {
  if (baseline) return kBaselineName;
  return std::string(prioritization_name(prioritization)) + "-" +
         assignment_name(assignment);
}

std::vector<std::string> StrategyName::all_names() {
  std::vector<std::string> names;
  names.reserve(22);
  for (const auto& [prio, prio_name] : kPrioritizations) {
    for (const auto& [assign, assign_name] : kAssignments) {
      names.push_back(std::string(prio_name) + "-" + assign_name);
    }
  }
  names.push_back(kBaselineName);
  return names;
}

RankTable compute_ranks(const AbstractDag& dag) {
  RankTable table;
  table.dag_version = dag.version();

  // Reverse topological sweep: a vertex is ready once all its successors
  // carry a rank; its own rank is 1 + the largest successor rank.
  std::map<VertexId, std::size_t> unresolved_successors;
  std::map<VertexId, std::vector<VertexId>> predecessors;
  for (const auto& [id, vertex] : dag.vertices()) {
    unresolved_successors[id] = 0;
  }
  for (const auto& [from, to] : dag.edges()) {
    ++unresolved_successors[from];
    predecessors[to].push_back(from);
  }

  std::deque<VertexId> ready;
  for (const auto& [id, count] : unresolved_successors) {
    if (count == 0) ready.push_back(id);  // sink
  }
  while (!ready.empty()) {
    VertexId v = ready.front();
    ready.pop_front();
    std::int64_t rank = 0;
    for (const auto& succ : dag.successors(v)) {
      rank = std::max(rank, table.ranks.at(succ) + 1);
    }
    table.ranks[v] = rank;
    for (const auto& pred : predecessors[v]) {
      if (--unresolved_successors[pred] == 0) ready.push_back(pred);
    }
  }
  return table;
}

namespace {

// The last two tie-break levels shared by every deterministic ordering.
bool fifo_less(const CandidateTask& a, const CandidateTask& b) {
  if (a.submission_seq != b.submission_seq) {
    return a.submission_seq < b.submission_seq;
  }
  return a.task_id < b.task_id;
}

}  // namespace

std::vector<CandidateTask> prioritize(std::vector<CandidateTask> pending,
                                      Prioritization strategy, Rng& rng) {
  switch (strategy) {
    case Prioritization::Fifo:
      std::sort(pending.begin(), pending.end(), fifo_less);
      break;
    case Prioritization::Random:
      rng.shuffle(pending);
      break;
    case Prioritization::SizeDesc:
      std::sort(pending.begin(), pending.end(),
                [](const CandidateTask& a, const CandidateTask& b) {
                  if (a.input_size_bytes != b.input_size_bytes) {
                    return a.input_size_bytes > b.input_size_bytes;
                  }
                  return fifo_less(a, b);
                });
      break;
    case Prioritization::SizeAsc:
      std::sort(pending.begin(), pending.end(),
                [](const CandidateTask& a, const CandidateTask& b) {
                  if (a.input_size_bytes != b.input_size_bytes) {
                    return a.input_size_bytes < b.input_size_bytes;
                  }
                  return fifo_less(a, b);
                });
      break;
    case Prioritization::RankFifo:
      std::sort(pending.begin(), pending.end(),
                [](const CandidateTask& a, const CandidateTask& b) {
                  if (a.rank != b.rank) return a.rank > b.rank;
                  return fifo_less(a, b);
                });
      break;
    case Prioritization::RankMin:
      std::sort(pending.begin(), pending.end(),
                [](const CandidateTask& a, const CandidateTask& b) {
                  if (a.rank != b.rank) return a.rank > b.rank;
                  if (a.input_size_bytes != b.input_size_bytes) {
                    return a.input_size_bytes > b.input_size_bytes;
                  }
                  return fifo_less(a, b);
                });
      break;
    case Prioritization::RankMax:
      std::sort(pending.begin(), pending.end(),
                [](const CandidateTask& a, const CandidateTask& b) {
                  if (a.rank != b.rank) return a.rank > b.rank;
                  if (a.input_size_bytes != b.input_size_bytes) {
                    return a.input_size_bytes < b.input_size_bytes;
                  }
                  return fifo_less(a, b);
                });
      break;
  }
  return pending;
}

namespace {

// Exact fraction comparison (values fit in 63 bits, products in 126),
// so utilization ties are decided identically on every platform.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0
};

bool frac_less(const Frac& a, const Frac& b) {
  return static_cast<__int128>(a.num) * b.den <
         static_cast<__int128>(b.num) * a.den;
}

Frac frac_max(const Frac& a, const Frac& b) { return frac_less(a, b) ? b : a; }

Frac post_assignment_utilization(const NodeView& node,
                                 const CandidateTask& task) {
  Frac cpu{node.allocated_cpus_milli + task.cpus_milli, node.total_cpus_milli};
  Frac mem{node.allocated_memory_bytes + task.memory_bytes,
           node.total_memory_bytes};
  return frac_max(cpu, mem);
}

}  // namespace

std::optional<NodeId> assign(const CandidateTask& task,
                             const std::vector<NodeView>& nodes,
                             Assignment strategy, RoundRobinCursor& cursor,
                             Rng& rng) {
  if (nodes.empty()) return std::nullopt;
  switch (strategy) {
    case Assignment::RoundRobin: {
      const std::size_t n = nodes.size();
      for (std::size_t probe = 0; probe < n; ++probe) {
        const std::size_t i = (cursor + probe) % n;
        if (nodes[i].fits(task)) {
          cursor = (i + 1) % n;
          return nodes[i].id;
        }
      }
      return std::nullopt;
    }
    case Assignment::Random: {
      std::vector<const NodeView*> feasible;
      for (const auto& node : nodes) {
        if (node.fits(task)) feasible.push_back(&node);
      }
      if (feasible.empty()) return std::nullopt;
      return feasible[rng.uniform_below(feasible.size())]->id;
    }
    case Assignment::Fair: {
      const NodeView* best = nullptr;
      Frac best_u;
      for (const auto& node : nodes) {
        if (!node.fits(task)) continue;
        Frac u = post_assignment_utilization(node, task);
        if (best == nullptr || frac_less(u, best_u) ||
            (!frac_less(best_u, u) && node.id < best->id)) {
          best = &node;
          best_u = u;
        }
      }
      if (best == nullptr) return std::nullopt;
      return best->id;
    }
  }
  return std::nullopt;
}

std::optional<NodeId> baseline_pick(const CandidateTask& task,
                                    const std::vector<NodeView>& nodes) {
  const NodeView* best = nullptr;
  Frac best_u;
  for (const auto& node : nodes) {
    if (!node.fits(task)) continue;
    Frac u{node.allocated_cpus_milli, node.total_cpus_milli};
    if (best == nullptr || frac_less(u, best_u) ||
        (!frac_less(best_u, u) && node.id < best->id)) {
      best = &node;
      best_u = u;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

std::vector<std::pair<TaskId, NodeId>> baseline_assign(
    std::vector<CandidateTask> pending, std::vector<NodeView> nodes) {
  Rng unused_rng;
  pending = prioritize(std::move(pending), Prioritization::Fifo, unused_rng);
  std::vector<std::pair<TaskId, NodeId>> alignments;
  for (const auto& task : pending) {
    auto choice = baseline_pick(task, nodes);
    if (!choice) continue;  // skip, don't block
    for (auto& node : nodes) {
      if (node.id == *choice) {
        node.allocated_cpus_milli += task.cpus_milli;
        node.allocated_memory_bytes += task.memory_bytes;
        break;
      }
    }
    alignments.emplace_back(task.task_id, *choice);
  }
  return alignments;
}

}  // namespace cws
