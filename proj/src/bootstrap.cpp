#include "tslm/bootstrap.hpp"

#include <algorithm>
#include <deque>

#include "tslm/rng.hpp"

namespace tslm {

std::vector<std::string> OracleSupervision::sample_actions(const TaskSpec& task,
                                                           const State& s, int k,
                                                           double /*temperature*/) {
  std::vector<std::string> actions = task.legal_actions(s);
  if (static_cast<int>(actions.size()) > k)
    actions.resize(static_cast<std::size_t>(k));
  return actions;
}

NoisySupervision::NoisySupervision(double eps, std::uint64_t seed, double garbage_rate)
    : eps_(eps), garbage_rate_(garbage_rate), state_(mix_seed(0xb00b57ull, seed)) {}

std::vector<std::string> NoisySupervision::sample_actions(const TaskSpec& task,
                                                          const State& s, int k,
                                                          double /*temperature*/) {
  Rng rng(state_);
  state_ = rng.next();  // advance the stream per call
  std::vector<std::string> legal = task.legal_actions(s);
  std::vector<std::string> out;
  for (int i = 0; i < k && i < static_cast<int>(legal.size()); ++i) {
    if (rng.chance(garbage_rate_)) {
      out.push_back("<?" + std::to_string(rng.below(1000)) + "?>");
      continue;
    }
    if (rng.chance(eps_))
      out.push_back(rng.pick(legal));
    else
      out.push_back(legal[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string normalize_action_ws(std::string_view text) {
  std::string out;
  bool in_space = true;  // trims leading whitespace
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    out.push_back(c);
    in_space = false;
  }
  return out;
}

bool is_duplicate_sibling(const std::vector<std::string>& existing,
                          std::string_view candidate) {
  std::string key = normalize_action_ws(candidate);
  for (const std::string& e : existing)
    if (normalize_action_ws(e) == key) return true;
  return false;
}

void sort_siblings(std::vector<ScoredAction>& candidates, bool gold_pinned_first) {
  auto begin = candidates.begin();
  if (gold_pinned_first && !candidates.empty() && candidates.front().gold) ++begin;
  std::stable_sort(begin, candidates.end(),
                   [](const ScoredAction& a, const ScoredAction& b) {
                     return a.score > b.score;
                   });
}

BootstrapResult bootstrap_tree(const TaskSpec& task, std::string_view problem,
                               const std::vector<std::string>& gold_path,
                               SupervisionPolicy& policy, const RewardFn& reward,
                               const BootstrapConfig& cfg) {
  if (cfg.branch_factor < 1) throw std::invalid_argument("branch_factor must be >= 1");

  State initial = task.initial_state(problem);
  int depth_budget = task.max_depth(initial);

  // The gold trajectory must replay to a goal.
  std::vector<std::string> gold_canonical;
  {
    State s = initial;
    for (const std::string& action : gold_path) {
      auto canonical = task.parse_action(action, s);
      if (!canonical) throw InvalidGoldPath("illegal step \"" + action + "\"");
      gold_canonical.push_back(*canonical);
      s = task.transition(s, *canonical);
    }
    if (!task.is_goal(s)) throw InvalidGoldPath("does not end at a goal state");
  }

  BootstrapResult res{SearchTree(std::string(problem)), {}, 0};

  struct Pending {
    NodeId id;
    State state;
    int depth;
    bool on_gold;
  };
  std::deque<Pending> queue;
  queue.push_back(Pending{res.tree.root(), initial, 0, true});
  bool gold_goal_created = false;

  while (!queue.empty() && !gold_goal_created) {
    Pending cur = queue.front();
    queue.pop_front();

    std::vector<ScoredAction> candidates;
    std::vector<std::string> texts;  // dedup keys, in sibling order
    auto try_add = [&](const std::string& action, bool gold) {
      if (is_duplicate_sibling(texts, action)) return;
      candidates.push_back(ScoredAction{action, 0.0, gold});
      texts.push_back(action);
    };

    int slots = cfg.branch_factor;
    if (cur.on_gold && cur.depth < static_cast<int>(gold_canonical.size())) {
      try_add(gold_canonical[static_cast<std::size_t>(cur.depth)], true);
      --slots;
    }
    // Illegal policy outputs are dropped without consuming a slot; duplicates
    // consume theirs.
    std::vector<std::string> sampled =
        policy.sample_actions(task, cur.state, 2 * cfg.branch_factor + 4,
                              cfg.temperature);
    std::size_t next_sample = 0;
    while (slots > 0 && next_sample < sampled.size()) {
      const std::string& raw = sampled[next_sample++];
      auto canonical = task.parse_action(raw, cur.state);
      if (!canonical) {
        ++res.illegal_candidates_dropped;
        continue;
      }
      try_add(*canonical, false);
      --slots;
    }

    for (ScoredAction& c : candidates)
      c.score = reward.score(task, cur.state, c.action);
    sort_siblings(candidates, cfg.gold_pinned_first);

    for (const ScoredAction& c : candidates) {
      if (static_cast<int>(res.tree.size()) >= cfg.max_nodes) throw BudgetExceeded();
      State next = task.transition(cur.state, c.action);
      Marker marker = task.classify(next, cur.depth + 1, depth_budget);
      if (!cfg.mark_failures && marker == Marker::Fail && !task.is_terminal(next))
        marker = Marker::Sep;  // plain Alg. 1: dead ends stay expandable
      NodeId child = res.tree.add_child(cur.id, c.action, marker);
      bool child_on_gold = cur.on_gold && c.gold;
      if (child_on_gold) res.gold_node_ids.push_back(child);
      if (marker == Marker::Goal && child_on_gold) gold_goal_created = true;
      if (marker == Marker::Sep)
        queue.push_back(Pending{child, std::move(next), cur.depth + 1, child_on_gold});
    }
  }

  if (!gold_goal_created)
    throw BudgetExceeded();  // ran dry before the gold chain completed
  return res;
}

}  // namespace tslm
