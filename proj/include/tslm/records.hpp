#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tslm/codec.hpp"
#include "tslm/gridworld.hpp"
#include "tslm/inference.hpp"
#include "tslm/tree.hpp"

namespace tslm {

// One task instance per JSONL line. Identity is "<task>-<seed>": generation
// is deterministic per seed.
struct InstanceRecord {
  std::string task;
  std::uint64_t seed = 0;
  std::string problem_text;
  std::vector<std::string> gold_path;
  bool solvable = false;           // game24 only
  int width = 0, height = 0;       // gridworld only
  std::vector<Coord> walls;        // gridworld only

  std::string id() const { return task + "-" + std::to_string(seed); }
};

struct TreeRecord {
  struct NodeRow {
    NodeId id = 0;
    NodeId parent = kNoParent;
    std::string action;
    std::string marker;  // SEP / FAIL / GOAL
  };
  struct Meta {
    int k = 5;
    double temperature = 0.3;
    std::string reward_preset = "uniform";
    std::uint64_t seed = 0;
    bool gold_pinned = false;
  };

  std::string tree_id;
  std::string task;
  std::string problem_text;
  std::vector<NodeRow> nodes;
  std::vector<NodeId> gold_node_ids;
  Meta meta;

  static TreeRecord from_tree(const SearchTree& tree, std::string tree_id,
                              std::string task, std::vector<NodeId> gold_node_ids,
                              Meta meta);
  SearchTree to_tree() const;  // throws on inconsistent rows
};

struct ResultRecord {
  std::string instance_id;
  std::string method;  // tslm / sc / pc / tot
  int k = 1;           // matched candidate budget of this run
  std::string verdict;
  int candidate_rank = 0;
  std::map<int, bool> pass_at;
  RunStats stats;
  std::string config_fingerprint;
  std::string error;  // empty unless the instance failed
};

// JSONL with sorted keys; save -> load -> save is byte-stable.
std::string instance_to_json(const InstanceRecord&);
InstanceRecord instance_from_json(const std::string& line);
std::string tree_record_to_json(const TreeRecord&);
TreeRecord tree_record_from_json(const std::string& line);
std::string example_to_json(const TrainingExample&);
TrainingExample example_from_json(const std::string& line);
std::string result_to_json(const ResultRecord&);
ResultRecord result_from_json(const std::string& line);

std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace tslm
