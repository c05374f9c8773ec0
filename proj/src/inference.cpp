#include "tslm/inference.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

#include "tslm/bootstrap.hpp"
#include "tslm/codec.hpp"

namespace tslm {

Strategy strategy_from_name(std::string_view name) {
  if (name == "bfs") return Strategy::Bfs;
  if (name == "dfs") return Strategy::Dfs;
  throw std::invalid_argument("unknown strategy \"" + std::string(name) + "\"");
}

std::string_view strategy_name(Strategy s) {
  return s == Strategy::Bfs ? "bfs" : "dfs";
}

std::string_view verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::Solved: return "solved";
    case VerdictKind::Unsolvable: return "unsolvable";
    case VerdictKind::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string strip_line(const std::string& text) {
  TokenSeq tokens;
  for (auto& t : tokenize(text))
    if (t != kNewlineToken) tokens.push_back(t);
  return detokenize(tokens);
}

}  // namespace

std::vector<NodeId> expand_node(ModelProvider& model, SearchTree& tree, NodeId id,
                                const InferenceConfig& cfg, RunStats& stats) {
  const TreeNode& node = tree.node(id);
  if (node.marker != Marker::Sep || !node.children.empty())
    throw std::logic_error("expand_node: node must be an unexpanded Sep node");

  GenerateRequest req;
  req.context = render_context_text(path_to(tree, id), tree.problem());
  req.stop = {std::string(kEosToken)};
  Generation gen = model.generate(req);
  ++stats.model_calls;
  stats.tokens_generated += gen.tokens_generated;

  DecodeResult decoded = decode_block_text(gen.text, cfg.tolerant_decode);
  if (!decoded.ok()) {
    // MalformedExpansion: the node becomes a dead end.
    tree.demote_to_fail(id);
    return {};
  }

  ++stats.nodes_expanded;
  std::vector<NodeId> added;
  std::vector<std::string> accepted;
  for (const ChildEntry& child : decoded.block.children) {
    if (static_cast<int>(added.size()) >= cfg.branch_cap) break;
    if (cfg.dedup && is_duplicate_sibling(accepted, child.action_text)) continue;
    accepted.push_back(child.action_text);
    added.push_back(tree.add_child(id, child.action_text, child.marker));
  }
  if (added.empty()) tree.demote_to_fail(id);  // all children were duplicates
  return added;
}

namespace {

struct DriveSettings {
  bool stop_on_first_valid = true;
  bool verify_fail_terminals = false;  // pass@k verifies every terminal
  int terminal_budget = 0;             // 0 = unlimited
};

struct DriveResult {
  SearchTree tree{""};
  RunStats stats;
  std::vector<std::pair<NodeId, bool>> terminals;  // (node, validated)
  std::optional<int> solved_rank;
  NodePath solved_path;
  bool node_budget_hit = false;
};

DriveResult drive_search(ModelProvider& model, const TaskSpec& task,
                         std::string_view problem, const InferenceConfig& cfg,
                         const DriveSettings& settings) {
  Timer timer;
  DriveResult res;
  res.tree = SearchTree(std::string(problem));
  State initial = task.initial_state(problem);
  int depth_budget = task.max_depth(initial);

  if (task.is_goal(initial)) {
    // Degenerate instance: the empty path is the candidate.
    ++res.stats.terminals_verified;
    if (task.validate_solution(problem, {})) {
      res.solved_rank = 1;
      res.solved_path = {};
      res.terminals.emplace_back(res.tree.root(), true);
    }
    res.stats.wall_ms = timer.ms();
    return res;
  }

  std::deque<NodeId> frontier{res.tree.root()};
  bool done = false;

  auto record_terminal = [&](NodeId id, bool is_goal_claim) {
    bool validated = false;
    if (is_goal_claim || settings.verify_fail_terminals) {
      validated = task.validate_solution(problem, path_to(res.tree, id));
      ++res.stats.terminals_verified;
    }
    if (is_goal_claim && !validated) res.tree.demote_to_fail(id);
    res.terminals.emplace_back(id, validated);
    if (validated && settings.stop_on_first_valid && !res.solved_rank) {
      res.solved_rank = static_cast<int>(res.terminals.size());
      res.solved_path = path_to(res.tree, id);
      done = true;
    }
    if (settings.terminal_budget > 0 &&
        static_cast<int>(res.terminals.size()) >= settings.terminal_budget)
      done = true;
  };

  while (!frontier.empty() && !done) {
    if (static_cast<int>(res.tree.size()) >= cfg.node_budget) {
      res.node_budget_hit = true;
      break;
    }
    NodeId id;
    if (cfg.strategy == Strategy::Bfs) {
      id = frontier.front();
      frontier.pop_front();
    } else {
      id = frontier.back();
      frontier.pop_back();
    }

    // A Sep node at the depth budget is a model lie; it becomes a dead end.
    if (res.tree.depth(id) >= depth_budget && !res.tree.is_root(id)) {
      res.tree.demote_to_fail(id);
      record_terminal(id, false);
      continue;
    }

    std::vector<NodeId> children = expand_node(model, res.tree, id, cfg, res.stats);
    if (children.empty()) {
      // Demoted on parse failure (or fully-duplicate block).
      if (!res.tree.is_root(id)) record_terminal(id, false);
      continue;
    }

    std::vector<NodeId> to_push;
    for (NodeId child : children) {
      Marker m = res.tree.node(child).marker;
      if (m == Marker::Goal) {
        record_terminal(child, true);
      } else if (m == Marker::Fail) {
        record_terminal(child, false);
      } else {
        to_push.push_back(child);
      }
      if (done) break;
    }
    if (done) break;
    if (cfg.strategy == Strategy::Bfs) {
      for (NodeId c : to_push) frontier.push_back(c);
    } else {
      for (auto it = to_push.rbegin(); it != to_push.rend(); ++it)
        frontier.push_back(*it);
    }
  }

  res.stats.wall_ms = timer.ms();
  return res;
}

}  // namespace

SearchOutcome run_tree_search(ModelProvider& model, const TaskSpec& task,
                              std::string_view problem, const InferenceConfig& cfg) {
  DriveSettings settings;
  settings.stop_on_first_valid = true;
  settings.verify_fail_terminals = false;
  DriveResult drive = drive_search(model, task, problem, cfg, settings);

  SearchOutcome out{std::move(drive.tree), Verdict{}, drive.stats};
  if (drive.solved_rank) {
    out.verdict.kind = VerdictKind::Solved;
    out.verdict.path = std::move(drive.solved_path);
    out.verdict.candidate_rank = *drive.solved_rank;
  } else if (drive.node_budget_hit) {
    out.verdict.kind = VerdictKind::BudgetExhausted;
  } else {
    out.verdict.kind = VerdictKind::Unsolvable;
  }
  return out;
}

PassAtKResult pass_at_k(ModelProvider& model, const TaskSpec& task,
                        std::string_view problem, const InferenceConfig& cfg,
                        const std::vector<int>& k_values) {
  for (int k : k_values)
    if (k > cfg.candidate_budget)
      throw std::invalid_argument("candidate_budget must cover every k");

  DriveSettings settings;
  settings.stop_on_first_valid = false;
  settings.verify_fail_terminals = true;
  settings.terminal_budget = cfg.candidate_budget;
  DriveResult drive = drive_search(model, task, problem, cfg, settings);

  PassAtKResult res;
  res.tree = std::move(drive.tree);
  res.stats = drive.stats;
  for (const auto& [id, validated] : drive.terminals)
    res.terminal_flags.push_back(validated);
  for (int k : k_values) {
    bool ok = false;
    for (int i = 0; i < k && i < static_cast<int>(res.terminal_flags.size()); ++i)
      ok = ok || res.terminal_flags[static_cast<std::size_t>(i)];
    res.success[k] = ok;
  }
  return res;
}

SearchOutcome run_sequential(ModelProvider& model, const TaskSpec& task,
                             std::string_view problem) {
  Timer timer;
  SearchOutcome out{SearchTree(std::string(problem)), Verdict{}, RunStats{}};
  State state = task.initial_state(problem);
  int depth_budget = task.max_depth(state);
  NodePath path;
  NodeId tip = out.tree.root();

  while (true) {
    if (task.is_goal(state)) {
      bool valid = task.validate_solution(problem, path);
      ++out.stats.terminals_verified;
      if (!path.empty())
        path.back().marker = valid ? Marker::Goal : Marker::Fail;
      out.verdict.kind = valid ? VerdictKind::Solved : VerdictKind::BudgetExhausted;
      out.verdict.path = path;
      out.verdict.candidate_rank = valid ? 1 : 0;
      break;
    }
    if (task.is_terminal(state) ||
        static_cast<int>(path.size()) >= depth_budget) {
      out.verdict.kind = VerdictKind::BudgetExhausted;
      out.verdict.path = path;
      break;
    }

    GenerateRequest req;
    req.context = render_context_text(path, problem);
    req.stop = {"\n"};
    Generation gen = model.generate(req);
    ++out.stats.model_calls;
    out.stats.tokens_generated += gen.tokens_generated;

    std::string action = strip_line(gen.text);
    auto canonical = task.parse_action(action, state);
    if (!canonical) throw ParseFailure("\"" + action + "\"");
    state = task.transition(state, *canonical);
    path.push_back(PathStep{*canonical, Marker::Sep});
    tip = out.tree.add_child(tip, *canonical,
                             task.is_goal(state) ? Marker::Goal : Marker::Sep);
    ++out.stats.nodes_expanded;
  }
  out.stats.wall_ms = timer.ms();
  return out;
}

SearchOutcome run_procedure_clone(ModelProvider& model, const TaskSpec& task,
                                  std::string_view problem,
                                  const InferenceConfig& cfg, int max_trace_tokens) {
  Timer timer;
  GenerateRequest req;
  req.context = std::string(problem);
  req.max_tokens = max_trace_tokens;
  Generation gen = model.generate(req);

  SearchOutcome out{SearchTree(std::string(problem)), Verdict{}, RunStats{}};
  out.stats.model_calls = 1;
  out.stats.tokens_generated = gen.tokens_generated;

  TraceParseResult parsed = parse_tree_dfs(gen.text, problem, /*tolerant=*/true);
  if (!parsed.ok()) throw TraceParseFailure(parsed.detail);
  out.tree = std::move(parsed.tree);
  for (const TreeNode& n : out.tree.nodes())
    if (!n.children.empty()) ++out.stats.nodes_expanded;

  std::vector<NodeId> terminals = terminal_nodes(out.tree, Traversal::Bfs);
  int budget = std::min<int>(cfg.candidate_budget, static_cast<int>(terminals.size()));
  out.verdict.kind = parsed.status == TraceStatus::Truncated
                         ? VerdictKind::BudgetExhausted
                         : VerdictKind::Unsolvable;
  for (int i = 0; i < budget; ++i) {
    NodeId id = terminals[static_cast<std::size_t>(i)];
    NodePath path = path_to(out.tree, id);
    ++out.stats.terminals_verified;
    if (task.validate_solution(problem, path)) {
      out.verdict.kind = VerdictKind::Solved;
      out.verdict.path = std::move(path);
      out.verdict.candidate_rank = i + 1;
      break;
    }
  }
  out.stats.wall_ms = timer.ms();
  return out;
}

SearchOutcome run_tot(ModelProvider& model, const TaskSpec& task,
                      std::string_view problem, const TotConfig& cfg) {
  Timer timer;
  SearchOutcome out{SearchTree(std::string(problem)), Verdict{}, RunStats{}};
  out.verdict.kind = VerdictKind::BudgetExhausted;

  std::shared_ptr<const RewardFn> evaluator =
      cfg.evaluator ? cfg.evaluator : make_reward(default_reward_name(task));

  State initial = task.initial_state(problem);
  int depth_budget = task.max_depth(initial);

  struct Entry {
    State state;
    NodePath path;
  };
  struct Cand {
    State state;
    NodePath path;
    double score;
  };

  std::vector<Entry> beam{Entry{initial, {}}};
  int candidates_seen = 0;
  bool done = false;

  for (int level = 0; level < depth_budget && !beam.empty() && !done; ++level) {
    std::vector<Cand> expansions;
    for (const Entry& entry : beam) {
      if (done) break;
      std::vector<std::string> accepted;
      GenerateRequest req;
      req.context = render_context_text(entry.path, problem);
      req.stop = {"\n"};
      req.temperature = cfg.temperature;
      for (int j = 0; j < cfg.samples_per_state && !done; ++j) {
        Generation gen = model.generate(req);
        ++out.stats.model_calls;
        out.stats.tokens_generated += gen.tokens_generated;
        auto canonical = task.parse_action(strip_line(gen.text), entry.state);
        if (!canonical) continue;
        if (is_duplicate_sibling(accepted, *canonical)) continue;
        accepted.push_back(*canonical);

        State next = task.transition(entry.state, *canonical);
        NodePath path = entry.path;
        path.push_back(PathStep{*canonical, Marker::Sep});
        bool terminal = task.is_goal(next) || task.is_terminal(next) ||
                        level + 1 >= depth_budget;
        if (terminal) {
          ++candidates_seen;
          ++out.stats.terminals_verified;
          bool valid = task.validate_solution(problem, path);
          if (valid) {
            path.back().marker = Marker::Goal;
            if (out.verdict.kind != VerdictKind::Solved) {
              out.verdict.kind = VerdictKind::Solved;
              out.verdict.path = path;
              out.verdict.candidate_rank = candidates_seen;
            }
            if (cfg.stop_at_first_success) done = true;
          }
          if (candidates_seen >= cfg.max_candidates) done = true;
        } else {
          double score = evaluator->score(task, entry.state, *canonical);
          expansions.push_back(Cand{std::move(next), std::move(path), score});
        }
      }
    }
    std::stable_sort(expansions.begin(), expansions.end(),
                     [](const Cand& a, const Cand& b) { return a.score > b.score; });
    beam.clear();
    for (std::size_t i = 0;
         i < expansions.size() && i < static_cast<std::size_t>(cfg.breadth); ++i)
      beam.push_back(Entry{std::move(expansions[i].state),
                           std::move(expansions[i].path)});
  }

  out.stats.wall_ms = timer.ms();
  return out;
}

}  // namespace tslm
