#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tslm/reward.hpp"
#include "tslm/task.hpp"
#include "tslm/tree.hpp"

namespace tslm {

// Candidate-action source for tree construction. Outputs may contain
// duplicates and unparseable strings; dedup and legality filtering happen
// downstream.
class SupervisionPolicy {
 public:
  virtual ~SupervisionPolicy() = default;
  virtual std::vector<std::string> sample_actions(const TaskSpec& task,
                                                  const State& s, int k,
                                                  double temperature) = 0;
};

// Enumerates legal actions in canonical order; temperature has no effect.
class OracleSupervision final : public SupervisionPolicy {
 public:
  std::vector<std::string> sample_actions(const TaskSpec& task, const State& s,
                                          int k, double temperature) override;
};

// Canonical enumeration with seeded noise: per slot, with probability eps the
// action is replaced by a uniformly random legal action, and occasionally an
// unparseable string leaks through.
class NoisySupervision final : public SupervisionPolicy {
 public:
  NoisySupervision(double eps, std::uint64_t seed, double garbage_rate = 0.02);
  std::vector<std::string> sample_actions(const TaskSpec& task, const State& s,
                                          int k, double temperature) override;

 private:
  double eps_;
  double garbage_rate_;
  std::uint64_t state_;
};

struct BootstrapConfig {
  int branch_factor = 5;       // k
  double temperature = 0.3;
  int max_nodes = 4000;
  bool gold_pinned_first = false;  // Alg. 1 pseudocode sorts gold with the rest
  bool mark_failures = true;
};

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("bootstrap node budget exceeded") {}
};
struct InvalidGoldPath : std::runtime_error {
  explicit InvalidGoldPath(const std::string& why)
      : std::runtime_error("invalid gold path: " + why) {}
};

struct BootstrapResult {
  SearchTree tree;
  std::vector<NodeId> gold_node_ids;  // root-to-goal chain
  int illegal_candidates_dropped = 0;
};

// Guided bootstrapping: BFS construction where on-gold nodes pin the gold
// action as candidate #1, further candidates come from the policy, siblings
// are deduplicated by normalized text and ordered by reward. Construction
// stops once the goal node has been created.
BootstrapResult bootstrap_tree(const TaskSpec& task, std::string_view problem,
                               const std::vector<std::string>& gold_path,
                               SupervisionPolicy& policy, const RewardFn& reward,
                               const BootstrapConfig& cfg);

// Trim + collapse internal whitespace; the "exact matching" dedup key.
std::string normalize_action_ws(std::string_view text);

bool is_duplicate_sibling(const std::vector<std::string>& existing,
                          std::string_view candidate);

struct ScoredAction {
  std::string action;
  double score = 0.0;
  bool gold = false;
};

// Stable descending sort by score (ties keep sampling order).
void sort_siblings(std::vector<ScoredAction>& candidates, bool gold_pinned_first);

}  // namespace tslm
