#include "tslm/oracle_model.hpp"

#include <algorithm>
#include <cmath>

#include "tslm/bootstrap.hpp"
#include "tslm/rng.hpp"

namespace tslm {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

bool truncate_tokens(std::string& text, int max_tokens) {
  if (max_tokens <= 0) return false;
  TokenSeq tokens = tokenize(text);
  if (static_cast<int>(tokens.size()) <= max_tokens) return false;
  tokens.resize(static_cast<std::size_t>(max_tokens));
  text = detokenize(tokens);
  return true;
}

}  // namespace

ParsedContext parse_oracle_context(const TaskSpec& task, std::string_view context) {
  std::vector<std::string> lines = split_lines(context);
  int problem_lines = task.problem_line_count();
  if (static_cast<int>(lines.size()) < problem_lines)
    throw UnparseableContext("expected at least " + std::to_string(problem_lines) +
                             " problem lines");
  std::string problem;
  for (int i = 0; i < problem_lines; ++i) {
    if (i) problem += '\n';
    problem += lines[static_cast<std::size_t>(i)];
  }

  ParsedContext ctx;
  ctx.problem = problem;
  try {
    ctx.state = task.initial_state(problem);
  } catch (const MalformedProblem& e) {
    throw UnparseableContext(e.what());
  }
  ctx.depth_budget = task.max_depth(ctx.state);

  for (std::size_t i = static_cast<std::size_t>(problem_lines); i < lines.size(); ++i) {
    TokenSeq tokens = tokenize(lines[i]);
    if (tokens.empty()) continue;
    Marker marker = Marker::Sep;
    if (auto m = marker_from_token(tokens.back())) {
      marker = *m;
      tokens.pop_back();
      if (tokens.empty()) throw UnparseableContext("marker with no action text");
    }
    std::string action = detokenize(tokens);
    if (task.is_goal(ctx.state) || task.is_terminal(ctx.state))
      throw IllegalPathInContext("path continues past a terminal state");
    auto canonical = task.parse_action(action, ctx.state);
    if (!canonical) throw IllegalPathInContext("\"" + action + "\"");
    ctx.state = task.transition(ctx.state, *canonical);
    ctx.path.push_back(PathStep{*canonical, marker});
    ++ctx.depth;
  }
  return ctx;
}

OracleModel::OracleModel(std::shared_ptr<const TaskSpec> task, OracleConfig cfg,
                         std::uint64_t seed)
    : task_(std::move(task)),
      reward_(make_reward(default_reward_name(*task_))),
      cfg_(cfg),
      rng_state_(mix_seed(0x0eac1eull, seed)) {}

OracleModel::Mode OracleModel::mode_for(const GenerateRequest& req) {
  for (const std::string& s : req.stop) {
    if (s.find(kEosToken) != std::string::npos) return Mode::Block;
    if (s == "\n") return Mode::Line;
  }
  return Mode::Trace;
}

std::vector<ChildEntry> OracleModel::expansion_children(const ParsedContext& ctx) const {
  // A non-const shim so the noisy subclass can perturb; the oracle itself is
  // deterministic and const in behavior.
  return const_cast<OracleModel*>(this)->node_children_dispatch(ctx.state, ctx.depth,
                                                                ctx.depth_budget);
}

Generation OracleModel::generate(const GenerateRequest& req) {
  ParsedContext ctx = parse_oracle_context(*task_, req.context);
  Mode mode = mode_for(req);
  std::string text;
  switch (mode) {
    case Mode::Block: {
      if (task_->is_goal(ctx.state))
        throw IllegalPathInContext("goals are never expanded");
      if (task_->is_terminal(ctx.state))
        throw IllegalPathInContext("terminal states are never expanded");
      std::vector<ChildEntry> children =
          node_children_dispatch(ctx.state, ctx.depth, ctx.depth_budget);
      if (children.empty())
        text = std::string(kBosToken) + " " + std::string(kEosToken);
      else
        text = encode_block_text(ExpansionBlock{std::move(children)});
      break;
    }
    case Mode::Line: {
      Rng rng(rng_state_);
      rng_state_ = rng.next();
      text = line_for(ctx, req.temperature, rng.next());
      break;
    }
    case Mode::Trace:
      text = trace_for(ctx);
      break;
  }
  truncate_tokens(text, req.max_tokens);
  return Generation{text, count_tokens(text)};
}

std::vector<ChildEntry> OracleModel::node_children_dispatch(const State& s, int depth,
                                                            int budget) {
  return node_children(s, depth, budget);
}

std::vector<ChildEntry> OracleModel::node_children(const State& s, int depth,
                                                   int budget) {
  std::vector<std::string> actions;
  if (cfg_.gold_first) {
    if (auto gold = task_->gold_action(s, budget - depth)) actions.push_back(*gold);
  }
  for (const std::string& a : task_->legal_actions(s)) {
    if (static_cast<int>(actions.size()) >= cfg_.emit_k) break;
    if (!is_duplicate_sibling(actions, a)) actions.push_back(a);
  }
  if (static_cast<int>(actions.size()) > cfg_.emit_k)
    actions.resize(static_cast<std::size_t>(cfg_.emit_k));

  std::vector<ChildEntry> children;
  for (const std::string& a : actions) {
    State next = task_->transition(s, a);
    children.push_back(ChildEntry{a, task_->classify(next, depth + 1, budget)});
  }
  return children;
}

std::string OracleModel::line_for(const ParsedContext& ctx, double temperature,
                                  std::uint64_t draw) {
  if (task_->is_goal(ctx.state) || task_->is_terminal(ctx.state))
    throw IllegalPathInContext("no next action from a terminal state");
  std::vector<std::string> legal = task_->legal_actions(ctx.state);
  auto gold = task_->gold_action(ctx.state, ctx.depth_budget - ctx.depth);
  if (temperature <= 0.0) return gold ? *gold : legal.front();

  // Softmax over the task reward with the gold action boosted to the top.
  std::vector<double> scores(legal.size());
  double best = -1e300;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    scores[i] = reward_->score(*task_, ctx.state, legal[i]);
    best = std::max(best, scores[i]);
  }
  for (std::size_t i = 0; i < legal.size(); ++i)
    if (gold && legal[i] == *gold) scores[i] = best + 1.0;
  double z = 0.0;
  std::vector<double> weights(legal.size());
  for (std::size_t i = 0; i < legal.size(); ++i) {
    weights[i] = std::exp((scores[i] - best) / temperature);
    z += weights[i];
  }
  double u = (static_cast<double>(draw >> 11) * 0x1.0p-53) * z;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    u -= weights[i];
    if (u <= 0.0) return legal[i];
  }
  return legal.back();
}

std::string OracleModel::trace_for(const ParsedContext& ctx) {
  if (task_->is_goal(ctx.state) || task_->is_terminal(ctx.state))
    throw IllegalPathInContext("nothing to expand");
  SearchTree tree(ctx.problem);

  struct Frame {
    NodeId id;
    State state;
    int depth;
  };
  std::vector<Frame> stack{Frame{tree.root(), ctx.state, ctx.depth}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (static_cast<int>(tree.size()) >= cfg_.trace_max_nodes) break;
    std::vector<ChildEntry> children =
        node_children_dispatch(f.state, f.depth, ctx.depth_budget);
    std::vector<Frame> to_expand;
    for (const ChildEntry& c : children) {
      NodeId id = tree.add_child(f.id, c.action_text, c.marker);
      if (c.marker == Marker::Sep)
        to_expand.push_back(Frame{id, task_->transition(f.state, c.action_text),
                                  f.depth + 1});
    }
    for (auto it = to_expand.rbegin(); it != to_expand.rend(); ++it)
      stack.push_back(*it);
  }

  // The trace is the serialized tree minus the problem prefix.
  TokenSeq tokens = serialize_tree_dfs(tree);
  std::size_t start = 0;
  while (start < tokens.size() && tokens[start] != kBosToken) ++start;
  return detokenize(TokenSeq(tokens.begin() + static_cast<long>(start), tokens.end()));
}

std::unique_ptr<ModelProvider> OracleModel::clone_with_seed(std::uint64_t seed) const {
  return std::make_unique<OracleModel>(task_, cfg_, seed);
}

std::string OracleModel::describe() const { return "oracle"; }

NoisyOracleModel::NoisyOracleModel(std::shared_ptr<const TaskSpec> task, double eps,
                                   std::uint64_t seed, OracleConfig cfg)
    : OracleModel(std::move(task), cfg, seed),
      eps_(eps),
      noise_state_(mix_seed(0x0a15e5ull, seed)) {
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("eps must be in [0, 1]");
}

std::vector<ChildEntry> NoisyOracleModel::node_children(const State& s, int depth,
                                                        int budget) {
  std::vector<ChildEntry> clean = OracleModel::node_children(s, depth, budget);
  if (eps_ == 0.0) {
    children_seen_ += clean.size();
    return clean;
  }
  Rng rng(noise_state_);
  noise_state_ = rng.next();
  std::vector<std::string> legal = task_->legal_actions(s);
  std::vector<ChildEntry> out;
  for (ChildEntry child : clean) {
    ++children_seen_;
    if (!rng.chance(eps_)) {
      out.push_back(std::move(child));
      continue;
    }
    ++corruptions_applied_;
    bool can_flip = child.marker != Marker::Goal;
    std::uint64_t choice = can_flip ? rng.below(3) : 1 + rng.below(2);
    if (choice == 0) {
      child.marker = child.marker == Marker::Sep ? Marker::Fail : Marker::Sep;
      out.push_back(std::move(child));
    } else if (choice == 1) {
      continue;  // dropped
    } else {
      std::vector<std::string> others;
      for (const std::string& a : legal)
        if (normalize_action_ws(a) != normalize_action_ws(child.action_text))
          others.push_back(a);
      if (others.empty()) continue;  // nothing to replace with
      std::string replacement = others[static_cast<std::size_t>(rng.below(others.size()))];
      State next = task_->transition(s, replacement);
      out.push_back(ChildEntry{replacement, task_->classify(next, depth + 1, budget)});
    }
  }
  return out;
}

Generation NoisyOracleModel::generate(const GenerateRequest& req) {
  if (mode_for(req) != Mode::Line) return OracleModel::generate(req);

  ParsedContext ctx = parse_oracle_context(*task_, req.context);
  Rng rng(noise_state_);
  noise_state_ = rng.next();
  std::string clean = line_for(ctx, req.temperature, rng.next());
  ++children_seen_;
  std::string text = clean;
  if (rng.chance(eps_)) {
    ++corruptions_applied_;
    std::vector<std::string> others;
    for (const std::string& a : task_->legal_actions(ctx.state))
      if (normalize_action_ws(a) != normalize_action_ws(clean)) others.push_back(a);
    if (!others.empty())
      text = others[static_cast<std::size_t>(rng.below(others.size()))];
  }
  truncate_tokens(text, req.max_tokens);
  return Generation{text, count_tokens(text)};
}

std::unique_ptr<ModelProvider> NoisyOracleModel::clone_with_seed(
    std::uint64_t seed) const {
  return std::make_unique<NoisyOracleModel>(task_, eps_, seed, cfg_);
}

std::string NoisyOracleModel::describe() const {
  return "noisy:" + std::to_string(eps_);
}

}  // namespace tslm
