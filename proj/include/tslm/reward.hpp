#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "tslm/task.hpp"

namespace tslm {

// Deterministic branch-ordering signal; higher = more promising.
class RewardFn {
 public:
  virtual ~RewardFn() = default;
  virtual std::string name() const = 0;
  virtual double score(const TaskSpec& task, const State& s,
                       std::string_view action) const = 0;
};

// Presets: "uniform" (all zero), "game24_closeness" (negated distance of the
// best one-step combination to 24), "gridworld_distance" (negated Manhattan
// distance to goal after the move).
std::shared_ptr<const RewardFn> make_reward(std::string_view name);

// Task-matched default preset name.
std::string default_reward_name(const TaskSpec& task);

}  // namespace tslm
