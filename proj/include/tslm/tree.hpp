#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tslm {

// Node markers. [BOS]/[EOS] delimit serialized expansion blocks and never
// appear on nodes.
enum class Marker { Sep, Fail, Goal };

std::string_view marker_token(Marker m);
std::optional<Marker> marker_from_token(std::string_view token);

using NodeId = int;
inline constexpr NodeId kNoParent = -1;

struct TreeNode {
  NodeId id = 0;
  std::string action_text;
  Marker marker = Marker::Sep;
  NodeId parent = kNoParent;
  std::vector<NodeId> children;  // insertion order; encodes sibling precedence
};

struct UnknownNode : std::runtime_error {
  explicit UnknownNode(NodeId id)
      : std::runtime_error("unknown node id " + std::to_string(id)) {}
};
struct UnknownParent : std::runtime_error {
  explicit UnknownParent(NodeId id)
      : std::runtime_error("unknown parent id " + std::to_string(id)) {}
};
struct ParentNotViable : std::runtime_error {
  explicit ParentNotViable(NodeId id)
      : std::runtime_error("node " + std::to_string(id) +
                           " is a Goal/Fail leaf and cannot take children") {}
};
struct RootHasNoContext : std::runtime_error {
  RootHasNoContext() : std::runtime_error("root has no context") {}
};

// Ordered branching tree with a synthetic Sep root that carries the problem
// statement. Ids are dense array indices; node 0 is always the root.
class SearchTree {
 public:
  explicit SearchTree(std::string problem);

  const std::string& problem() const { return problem_; }
  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  }

  const TreeNode& node(NodeId id) const;
  bool is_root(NodeId id) const { return id == 0; }
  bool is_internal(NodeId id) const { return !node(id).children.empty(); }
  int depth(NodeId id) const;

  // Appends a new leaf as the parent's last child.
  NodeId add_child(NodeId parent, std::string action_text, Marker marker);

  // Demotes a mislabeled node to Fail. Only legal on childless nodes.
  void demote_to_fail(NodeId id);

  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::string problem_;
  std::vector<TreeNode> nodes_;
};

struct PathStep {
  std::string action_text;
  Marker marker = Marker::Sep;
  bool operator==(const PathStep&) const = default;
};

// Root-to-node action sequence, excluding the synthetic root.
using NodePath = std::vector<PathStep>;

NodePath path_to(const SearchTree& tree, NodeId id);

// Eq.-style conditioning set: ancestor steps in root-to-parent order, then
// earlier siblings in sibling order. Later siblings, cousins and unrelated
// subtrees never appear.
NodePath context_of(const SearchTree& tree, NodeId id);

enum class Traversal { Bfs, Dfs };

// All Fail/Goal nodes in traversal order. BFS orders by depth then sibling
// discovery; DFS is preorder following sibling preference order.
std::vector<NodeId> terminal_nodes(const SearchTree& tree, Traversal order);

}  // namespace tslm
