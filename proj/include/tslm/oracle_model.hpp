#pragma once

#include <memory>
#include <optional>

#include "tslm/codec.hpp"
#include "tslm/model.hpp"
#include "tslm/reward.hpp"
#include "tslm/task.hpp"

namespace tslm {

struct OracleConfig {
  int emit_k = 5;          // children per expansion block
  bool gold_first = true;  // pin a goal-reaching action at slot 1 when one exists
  int trace_max_nodes = 4000;
};

// Replayed context split into (problem, path, live state).
struct ParsedContext {
  std::string problem;
  NodePath path;
  State state;
  int depth = 0;
  int depth_budget = 0;
};

ParsedContext parse_oracle_context(const TaskSpec& task, std::string_view context);

// The perfectly-trained model: replays the stitched context through the task
// and emits exactly the children the predefined search tree holds there.
class OracleModel : public ModelProvider {
 public:
  OracleModel(std::shared_ptr<const TaskSpec> task, OracleConfig cfg = {},
              std::uint64_t seed = 1);

  Generation generate(const GenerateRequest& req) override;
  std::unique_ptr<ModelProvider> clone_with_seed(std::uint64_t seed) const override;
  std::string describe() const override;

  // The uncorrupted children for a context; the noisy model perturbs these.
  std::vector<ChildEntry> expansion_children(const ParsedContext& ctx) const;

 protected:
  enum class Mode { Block, Line, Trace };
  static Mode mode_for(const GenerateRequest& req);

  // Children of the node holding `s` at `depth`; the noisy subclass perturbs.
  virtual std::vector<ChildEntry> node_children(const State& s, int depth,
                                                int budget);
  std::vector<ChildEntry> node_children_dispatch(const State& s, int depth,
                                                 int budget);

  std::string line_for(const ParsedContext& ctx, double temperature,
                       std::uint64_t draw);
  std::string trace_for(const ParsedContext& ctx);

  std::shared_ptr<const TaskSpec> task_;
  std::shared_ptr<const RewardFn> reward_;
  OracleConfig cfg_;
  std::uint64_t rng_state_;
};

// Oracle with seeded per-child corruption: with probability eps a child is
// dropped, its Sep/Fail marker flipped, or its action replaced by another
// legal action.
class NoisyOracleModel final : public OracleModel {
 public:
  NoisyOracleModel(std::shared_ptr<const TaskSpec> task, double eps,
                   std::uint64_t seed, OracleConfig cfg = {});

  Generation generate(const GenerateRequest& req) override;
  std::unique_ptr<ModelProvider> clone_with_seed(std::uint64_t seed) const override;
  std::string describe() const override;

  std::uint64_t children_seen() const { return children_seen_; }
  std::uint64_t corruptions_applied() const { return corruptions_applied_; }

 protected:
  std::vector<ChildEntry> node_children(const State& s, int depth,
                                        int budget) override;

 private:
  double eps_;
  std::uint64_t noise_state_;
  std::uint64_t children_seen_ = 0;
  std::uint64_t corruptions_applied_ = 0;
};

}  // namespace tslm
