#include "tslm/tree.hpp"

#include <algorithm>
#include <deque>

namespace tslm {

std::string_view marker_token(Marker m) {
  switch (m) {
    case Marker::Sep: return "[SEP]";
    case Marker::Fail: return "[FAIL]";
    case Marker::Goal: return "[GOAL]";
  }
  return "[SEP]";
}

std::optional<Marker> marker_from_token(std::string_view token) {
  if (token == "[SEP]") return Marker::Sep;
  if (token == "[FAIL]") return Marker::Fail;
  if (token == "[GOAL]") return Marker::Goal;
  return std::nullopt;
}

SearchTree::SearchTree(std::string problem) : problem_(std::move(problem)) {
  nodes_.push_back(TreeNode{0, "", Marker::Sep, kNoParent, {}});
}

const TreeNode& SearchTree::node(NodeId id) const {
  if (!contains(id)) throw UnknownNode(id);
  return nodes_[static_cast<std::size_t>(id)];
}

int SearchTree::depth(NodeId id) const {
  int d = 0;
  for (NodeId cur = node(id).parent; cur != kNoParent;
       cur = nodes_[static_cast<std::size_t>(cur)].parent)
    ++d;
  return d;
}

NodeId SearchTree::add_child(NodeId parent, std::string action_text, Marker marker) {
  if (!contains(parent)) throw UnknownParent(parent);
  if (nodes_[static_cast<std::size_t>(parent)].marker != Marker::Sep)
    throw ParentNotViable(parent);
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(TreeNode{id, std::move(action_text), marker, parent, {}});
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

void SearchTree::demote_to_fail(NodeId id) {
  if (!contains(id)) throw UnknownNode(id);
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.children.empty())
    throw ParentNotViable(id);  // demoting an expanded node would orphan children
  n.marker = Marker::Fail;
}

NodePath path_to(const SearchTree& tree, NodeId id) {
  const TreeNode& target = tree.node(id);
  NodePath path;
  for (const TreeNode* cur = &target; cur->parent != kNoParent;
       cur = &tree.node(cur->parent))
    path.push_back(PathStep{cur->action_text, cur->marker});
  std::reverse(path.begin(), path.end());
  return path;
}

NodePath context_of(const SearchTree& tree, NodeId id) {
  const TreeNode& n = tree.node(id);
  if (tree.is_root(id)) throw RootHasNoContext();
  NodePath ctx = path_to(tree, n.parent);
  for (NodeId sib : tree.node(n.parent).children) {
    if (sib == id) break;
    const TreeNode& s = tree.node(sib);
    ctx.push_back(PathStep{s.action_text, s.marker});
  }
  return ctx;
}

std::vector<NodeId> terminal_nodes(const SearchTree& tree, Traversal order) {
  std::vector<NodeId> out;
  auto take = [&](NodeId id) {
    if (tree.node(id).marker != Marker::Sep) out.push_back(id);
  };
  if (order == Traversal::Bfs) {
    std::deque<NodeId> queue{tree.root()};
    while (!queue.empty()) {
      NodeId id = queue.front();
      queue.pop_front();
      take(id);
      for (NodeId c : tree.node(id).children) queue.push_back(c);
    }
  } else {
    std::vector<NodeId> stack{tree.root()};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      take(id);
      const auto& ch = tree.node(id).children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

}  // namespace tslm
