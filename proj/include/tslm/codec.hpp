#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tslm/tokens.hpp"
#include "tslm/tree.hpp"

namespace tslm {

struct ChildEntry {
  std::string action_text;
  Marker marker = Marker::Sep;
  bool operator==(const ChildEntry&) const = default;
};

// One [BOS]...[EOS] unit: the ordered children generated for a single node.
struct ExpansionBlock {
  std::vector<ChildEntry> children;
  bool operator==(const ExpansionBlock&) const = default;
};

struct EmptyBlock : std::runtime_error {
  EmptyBlock() : std::runtime_error("expansion block has no children") {}
};
struct ReservedTokenInAction : std::runtime_error {
  explicit ReservedTokenInAction(std::string_view action)
      : std::runtime_error("action text contains a reserved token or newline: \"" +
                           std::string(action) + "\"") {}
};
struct NonViableInterior : std::runtime_error {
  NonViableInterior()
      : std::runtime_error("interior path entry is Fail/Goal; only Sep nodes have descendants") {}
};

// Layout: "[BOS]" newline, then one line per child "action MARKER", with
// "[EOS]" following the final marker on the same line.
TokenSeq encode_block(const ExpansionBlock& block);
std::string encode_block_text(const ExpansionBlock& block);

enum class DecodeStatus {
  Ok,
  Truncated,      // tolerant mode: trailing [EOS] (and possibly a child) missing
  MissingBos,
  MissingEos,     // strict mode only; tolerant yields Truncated
  DanglingAction, // action text with no marker (strict mode)
  EmptyBlock,
  ReservedToken,  // reserved token mid-action
};

std::string_view decode_status_name(DecodeStatus s);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Ok;
  ExpansionBlock block;  // meaningful when ok()
  bool ok() const {
    return status == DecodeStatus::Ok || status == DecodeStatus::Truncated;
  }
};

// Never throws: arbitrary model output decodes to a block or a classified
// error.
DecodeResult decode_block(const TokenSeq& tokens, bool tolerant = false);
DecodeResult decode_block_text(std::string_view text, bool tolerant = false);

// Stitched prompt for expanding the path's last node: problem, newline, then
// each path action suffixed with its marker, one per line.
TokenSeq render_context(const NodePath& path, std::string_view problem);
std::string render_context_text(const NodePath& path, std::string_view problem);

// Full-tree depth-first serialization: problem, then preorder emission where
// each internal node's children form one block and a Sep child's own block
// nests immediately after its entry line.
TokenSeq serialize_tree_dfs(const SearchTree& tree);
std::string serialize_tree_dfs_text(const SearchTree& tree);

enum class TraceStatus { Ok, Truncated, Malformed };

struct TraceParseResult {
  TraceStatus status = TraceStatus::Malformed;
  SearchTree tree{""};
  std::string detail;
  bool ok() const { return status != TraceStatus::Malformed; }
};

// Inverse of serialize_tree_dfs for a trace that starts at the root block
// (the problem is supplied by the caller). Tolerant mode salvages the parsed
// prefix of a truncated trace.
TraceParseResult parse_tree_dfs(std::string_view trace, std::string_view problem,
                                bool tolerant = true);

struct TrainingExample {
  std::string context;  // stitched path rendering; no [BOS]/[EOS]
  std::string target;   // encoded expansion block
  std::string tree_id;
  NodeId node_id = 0;
};

// One example per internal node, root included. Ancestors live in the
// context, earlier siblings in the target prefix, unrelated subtrees nowhere.
std::vector<TrainingExample> extract_training_examples(const SearchTree& tree,
                                                       std::string_view tree_id = "");

}  // namespace tslm
