#include "tslm/codec.hpp"

#include <cassert>

namespace tslm {

namespace {

void validate_action_text(std::string_view action) {
  if (action.empty()) throw std::invalid_argument("empty action text");
  if (contains_reserved_token(action) || action.find('\n') != std::string_view::npos)
    throw ReservedTokenInAction(action);
}

void validate_problem_text(std::string_view problem) {
  if (contains_reserved_token(problem)) throw ReservedTokenInAction(problem);
}

}  // namespace

TokenSeq encode_block(const ExpansionBlock& block) {
  if (block.children.empty()) throw EmptyBlock();
  TokenSeq out;
  out.emplace_back(kBosToken);
  out.emplace_back(kNewlineToken);
  for (std::size_t i = 0; i < block.children.size(); ++i) {
    const ChildEntry& c = block.children[i];
    validate_action_text(c.action_text);
    TokenSeq action = tokenize(c.action_text);
    out.insert(out.end(), action.begin(), action.end());
    out.emplace_back(marker_token(c.marker));
    if (i + 1 < block.children.size())
      out.emplace_back(kNewlineToken);
    else
      out.emplace_back(kEosToken);
  }
  return out;
}

std::string encode_block_text(const ExpansionBlock& block) {
  return detokenize(encode_block(block));
}

std::string_view decode_status_name(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::Ok: return "ok";
    case DecodeStatus::Truncated: return "truncated";
    case DecodeStatus::MissingBos: return "missing_bos";
    case DecodeStatus::MissingEos: return "missing_eos";
    case DecodeStatus::DanglingAction: return "dangling_action";
    case DecodeStatus::EmptyBlock: return "empty_block";
    case DecodeStatus::ReservedToken: return "reserved_token";
  }
  return "unknown";
}

DecodeResult decode_block(const TokenSeq& tokens, bool tolerant) {
  DecodeResult res;
  std::size_t i = 0;
  auto skip_newlines = [&] {
    while (i < tokens.size() && tokens[i] == kNewlineToken) ++i;
  };

  skip_newlines();
  if (i >= tokens.size() || tokens[i] != kBosToken) {
    res.status = DecodeStatus::MissingBos;
    return res;
  }
  ++i;

  auto only_newlines_remain = [&] {
    for (std::size_t j = i; j < tokens.size(); ++j)
      if (tokens[j] != kNewlineToken) return false;
    return true;
  };

  while (true) {
    skip_newlines();
    if (i >= tokens.size()) {
      // Generation ended before [EOS].
      if (tolerant && !res.block.children.empty()) {
        res.status = DecodeStatus::Truncated;
      } else if (res.block.children.empty()) {
        res.status = tolerant ? DecodeStatus::EmptyBlock : DecodeStatus::MissingEos;
      } else {
        res.status = DecodeStatus::MissingEos;
      }
      return res;
    }
    if (tokens[i] == kEosToken) {
      res.status = res.block.children.empty() ? DecodeStatus::EmptyBlock
                                              : DecodeStatus::Ok;
      return res;
    }
    if (tokens[i] == kBosToken || is_marker_token(tokens[i])) {
      // Reserved token where action text was expected.
      res.status = DecodeStatus::ReservedToken;
      return res;
    }

    // Parse one child: action tokens up to a marker.
    TokenSeq action;
    while (true) {
      if (i >= tokens.size()) {
        if (tolerant && !res.block.children.empty())
          res.status = DecodeStatus::Truncated;  // partial child dropped
        else
          res.status = DecodeStatus::DanglingAction;
        return res;
      }
      const std::string& t = tokens[i];
      if (t == kBosToken) {
        res.status = DecodeStatus::ReservedToken;
        return res;
      }
      if (t == kEosToken) {
        res.status = DecodeStatus::DanglingAction;
        return res;
      }
      if (t == kNewlineToken) {
        if (tolerant && !res.block.children.empty()) {
          ++i;
          if (only_newlines_remain()) {
            res.status = DecodeStatus::Truncated;
            return res;
          }
        }
        res.status = DecodeStatus::DanglingAction;
        return res;
      }
      if (is_marker_token(t)) {
        res.block.children.push_back(
            ChildEntry{detokenize(action), *marker_from_token(t)});
        ++i;
        break;
      }
      action.push_back(t);
      ++i;
    }
  }
}

DecodeResult decode_block_text(std::string_view text, bool tolerant) {
  return decode_block(tokenize(text), tolerant);
}

TokenSeq render_context(const NodePath& path, std::string_view problem) {
  validate_problem_text(problem);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (path[i].marker != Marker::Sep) throw NonViableInterior();
  TokenSeq out = tokenize(problem);
  if (path.empty()) return out;
  out.emplace_back(kNewlineToken);
  for (const PathStep& step : path) {
    validate_action_text(step.action_text);
    TokenSeq action = tokenize(step.action_text);
    out.insert(out.end(), action.begin(), action.end());
    out.emplace_back(marker_token(step.marker));
    out.emplace_back(kNewlineToken);
  }
  return out;
}

std::string render_context_text(const NodePath& path, std::string_view problem) {
  return detokenize(render_context(path, problem));
}

namespace {

void emit_block_dfs(const SearchTree& tree, NodeId id, TokenSeq& out) {
  const auto& children = tree.node(id).children;
  assert(!children.empty());
  out.emplace_back(kBosToken);
  out.emplace_back(kNewlineToken);
  for (std::size_t i = 0; i < children.size(); ++i) {
    const TreeNode& c = tree.node(children[i]);
    validate_action_text(c.action_text);
    TokenSeq action = tokenize(c.action_text);
    out.insert(out.end(), action.begin(), action.end());
    out.emplace_back(marker_token(c.marker));
    if (!c.children.empty()) {
      out.emplace_back(kNewlineToken);
      emit_block_dfs(tree, c.id, out);
    }
    if (i + 1 < children.size())
      out.emplace_back(kNewlineToken);
    else
      out.emplace_back(kEosToken);
  }
}

}  // namespace

TokenSeq serialize_tree_dfs(const SearchTree& tree) {
  validate_problem_text(tree.problem());
  TokenSeq out = tokenize(tree.problem());
  if (tree.node(tree.root()).children.empty()) return out;
  out.emplace_back(kNewlineToken);
  emit_block_dfs(tree, tree.root(), out);
  return out;
}

std::string serialize_tree_dfs_text(const SearchTree& tree) {
  return detokenize(serialize_tree_dfs(tree));
}

TraceParseResult parse_tree_dfs(std::string_view trace, std::string_view problem,
                                bool tolerant) {
  TraceParseResult res;
  res.tree = SearchTree(std::string(problem));
  TokenSeq tokens = tokenize(trace);
  std::size_t i = 0;
  auto skip_newlines = [&] {
    while (i < tokens.size() && tokens[i] == kNewlineToken) ++i;
  };
  auto fail = [&](std::string detail) {
    res.status = TraceStatus::Malformed;
    res.detail = std::move(detail);
    return res;
  };
  auto eof = [&]() -> TraceParseResult {
    if (tolerant) {
      res.status = TraceStatus::Truncated;
      return res;
    }
    return fail("trace ended before the root block closed");
  };

  skip_newlines();
  if (i >= tokens.size() || tokens[i] != kBosToken)
    return fail("trace does not start with [BOS]");
  ++i;

  std::vector<NodeId> open{res.tree.root()};  // innermost block last
  NodeId last_child = kNoParent;
  while (!open.empty()) {
    skip_newlines();
    if (i >= tokens.size()) return eof();
    const std::string& t = tokens[i];
    if (t == kEosToken) {
      if (res.tree.node(open.back()).children.empty())
        return fail("empty expansion block");
      open.pop_back();
      last_child = kNoParent;
      ++i;
      continue;
    }
    if (t == kBosToken) {
      // A nested block binds to the child entry just parsed, which must be Sep.
      if (last_child == kNoParent)
        return fail("nested [BOS] without a preceding child entry");
      if (res.tree.node(last_child).marker != Marker::Sep)
        return fail("nested block under a non-Sep child");
      open.push_back(last_child);
      last_child = kNoParent;
      ++i;
      continue;
    }
    if (is_marker_token(t)) return fail("marker token with no action text");

    TokenSeq action;
    bool closed = false;
    while (i < tokens.size()) {
      const std::string& a = tokens[i];
      if (a == kBosToken || a == kEosToken || a == kNewlineToken)
        return fail("action text with no marker");
      if (is_marker_token(a)) {
        last_child = res.tree.add_child(open.back(), detokenize(action),
                                        *marker_from_token(a));
        ++i;
        closed = true;
        break;
      }
      action.push_back(a);
      ++i;
    }
    if (!closed) return eof();
  }
  res.status = TraceStatus::Ok;
  return res;
}

std::vector<TrainingExample> extract_training_examples(const SearchTree& tree,
                                                       std::string_view tree_id) {
  std::vector<TrainingExample> out;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const TreeNode& n = tree.node(id);
    if (n.children.empty()) continue;
    ExpansionBlock block;
    for (NodeId c : n.children) {
      const TreeNode& child = tree.node(c);
      block.children.push_back(ChildEntry{child.action_text, child.marker});
    }
    TrainingExample ex;
    ex.context = render_context_text(path_to(tree, id), tree.problem());
    ex.target = encode_block_text(block);
    ex.tree_id = std::string(tree_id);
    ex.node_id = id;
    out.push_back(std::move(ex));
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

}  // namespace tslm
