#include "tslm/reward.hpp"

#include <boost/rational.hpp>
#include <cmath>
#include <cstdlib>

#include "tslm/game24.hpp"
#include "tslm/gridworld.hpp"

namespace tslm {

namespace {

class UniformReward final : public RewardFn {
 public:
  std::string name() const override { return "uniform"; }
  double score(const TaskSpec&, const State&, std::string_view) const override {
    return 0.0;
  }
};

double rational_to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

class Game24Closeness final : public RewardFn {
 public:
  std::string name() const override { return "game24_closeness"; }
  double score(const TaskSpec& task, const State& s,
               std::string_view action) const override {
    State next = task.transition(s, action);
    const auto& st = std::any_cast<const Game24State&>(next);
    if (st.numbers.size() == 1)
      return -std::abs(rational_to_double(st.numbers[0]) - 24.0);
    double best = std::numeric_limits<double>::infinity();
    for (const std::string& a : game24_actions(st)) {
      // Result is the tail of "x op y = r".
      auto pos = a.rfind(" = ");
      auto r = parse_rational(a.substr(pos + 3));
      best = std::min(best, std::abs(rational_to_double(*r) - 24.0));
    }
    return -best;
  }
};

class GridworldDistance final : public RewardFn {
 public:
  std::string name() const override { return "gridworld_distance"; }
  double score(const TaskSpec& task, const State& s,
               std::string_view action) const override {
    State next = task.transition(s, action);
    const auto& st = std::any_cast<const GridState&>(next);
    return -static_cast<double>(std::abs(st.pos.x - st.spec->goal.x) +
                                std::abs(st.pos.y - st.spec->goal.y));
  }
};

}  // namespace

std::shared_ptr<const RewardFn> make_reward(std::string_view name) {
  if (name == "uniform") return std::make_shared<UniformReward>();
  if (name == "game24_closeness") return std::make_shared<Game24Closeness>();
  if (name == "gridworld_distance") return std::make_shared<GridworldDistance>();
  throw std::invalid_argument("unknown reward preset \"" + std::string(name) + "\"");
}

std::string default_reward_name(const TaskSpec& task) {
  if (task.name() == "game24") return "game24_closeness";
  if (task.name() == "gridworld") return "gridworld_distance";
  return "uniform";
}

}  // namespace tslm
