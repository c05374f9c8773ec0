#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "tslm/model.hpp"
#include "tslm/reward.hpp"
#include "tslm/task.hpp"
#include "tslm/tree.hpp"

namespace tslm {

enum class Strategy { Bfs, Dfs };

Strategy strategy_from_name(std::string_view name);
std::string_view strategy_name(Strategy s);

struct InferenceConfig {
  Strategy strategy = Strategy::Bfs;
  int branch_cap = 5;          // first k parsed children kept per expansion
  int node_budget = 100000;
  int candidate_budget = 100;  // terminals to verify before giving up
  bool dedup = true;
  bool tolerant_decode = false;
};

enum class VerdictKind { Solved, Unsolvable, BudgetExhausted };

std::string_view verdict_name(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::BudgetExhausted;
  NodePath path;           // ends in the validated Goal when Solved
  int candidate_rank = 0;  // 1-based terminal index when Solved
};

struct RunStats {
  std::uint64_t model_calls = 0;
  std::uint64_t tokens_generated = 0;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t terminals_verified = 0;
  double wall_ms = 0.0;
};

struct SearchOutcome {
  SearchTree tree{""};
  Verdict verdict;
  RunStats stats;
};

struct ParseFailure : std::runtime_error {
  explicit ParseFailure(const std::string& why)
      : std::runtime_error("expansion parse failure: " + why) {}
};
struct TraceParseFailure : std::runtime_error {
  explicit TraceParseFailure(const std::string& why)
      : std::runtime_error("trace parse failure: " + why) {}
};

// Generate -> parse -> stitch for one Sep node: prompts with the stitched
// path context, decodes the block, drops duplicate siblings, keeps the first
// branch_cap children. On strict-mode parse failure the node is demoted to
// Fail (reason MalformedExpansion) and no children are added.
std::vector<NodeId> expand_node(ModelProvider& model, SearchTree& tree, NodeId id,
                                const InferenceConfig& cfg, RunStats& stats);

// BFS/DFS tree search until a validated Goal, an exhausted frontier
// (Unsolvable) or the node budget (BudgetExhausted). Invalid Goal claims are
// demoted to Fail and the search continues.
SearchOutcome run_tree_search(ModelProvider& model, const TaskSpec& task,
                              std::string_view problem, const InferenceConfig& cfg);

struct PassAtKResult {
  std::map<int, bool> success;
  std::vector<bool> terminal_flags;  // validated-goal flag per terminal, in order
  SearchTree tree{""};
  RunStats stats;
};

// Collects the first candidate_budget terminals without stopping at the
// first success; success@k = any of the first k verifies.
PassAtKResult pass_at_k(ModelProvider& model, const TaskSpec& task,
                        std::string_view problem, const InferenceConfig& cfg,
                        const std::vector<int>& k_values);

// SC baseline: greedy single-path decoding, one action per step.
SearchOutcome run_sequential(ModelProvider& model, const TaskSpec& task,
                             std::string_view problem);

// PC baseline: one continuous DFS-trace generation, parsed back into a tree,
// first candidate_budget terminals verified.
SearchOutcome run_procedure_clone(ModelProvider& model, const TaskSpec& task,
                                  std::string_view problem,
                                  const InferenceConfig& cfg,
                                  int max_trace_tokens = 0);

struct TotConfig {
  int breadth = 5;
  int samples_per_state = 8;
  double temperature = 0.3;
  int max_candidates = 100;
  std::shared_ptr<const RewardFn> evaluator;  // defaults to the task preset
  bool stop_at_first_success = false;         // off = matched-budget accounting
};

// ToT baseline: external beam search sampling single actions independently,
// scored by the evaluator, top `breadth` kept per level.
SearchOutcome run_tot(ModelProvider& model, const TaskSpec& task,
                      std::string_view problem, const TotConfig& cfg);

}  // namespace tslm
