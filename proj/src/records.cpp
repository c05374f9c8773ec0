#include "tslm/records.hpp"

#include <fstream>

#include <json.hpp>

namespace tslm {

using nlohmann::json;

namespace {

json walls_to_json(const std::vector<Coord>& walls) {
  json arr = json::array();
  for (Coord c : walls) arr.push_back(json::array({c.x, c.y}));
  return arr;
}

std::vector<Coord> walls_from_json(const json& arr) {
  std::vector<Coord> out;
  for (const auto& w : arr) out.push_back(Coord{w.at(0), w.at(1)});
  return out;
}

std::string marker_name(Marker m) {
  switch (m) {
    case Marker::Sep: return "SEP";
    case Marker::Fail: return "FAIL";
    case Marker::Goal: return "GOAL";
  }
  return "SEP";
}

}  // namespace

std::string instance_to_json(const InstanceRecord& r) {
  json j;
  j["task"] = r.task;
  j["seed"] = r.seed;
  j["problem_text"] = r.problem_text;
  j["gold_path"] = r.gold_path;
  if (r.task == "game24") j["solvable"] = r.solvable;
  if (r.task == "gridworld") {
    j["width"] = r.width;
    j["height"] = r.height;
    j["walls"] = walls_to_json(r.walls);
  }
  return j.dump();
}

InstanceRecord instance_from_json(const std::string& line) {
  json j = json::parse(line);
  InstanceRecord r;
  r.task = j.at("task").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.problem_text = j.at("problem_text").get<std::string>();
  r.gold_path = j.at("gold_path").get<std::vector<std::string>>();
  if (j.contains("solvable")) r.solvable = j["solvable"].get<bool>();
  if (j.contains("width")) r.width = j["width"].get<int>();
  if (j.contains("height")) r.height = j["height"].get<int>();
  if (j.contains("walls")) r.walls = walls_from_json(j["walls"]);
  return r;
}

TreeRecord TreeRecord::from_tree(const SearchTree& tree, std::string tree_id,
                                 std::string task, std::vector<NodeId> gold_node_ids,
                                 Meta meta) {
  TreeRecord rec;
  rec.tree_id = std::move(tree_id);
  rec.task = std::move(task);
  rec.problem_text = tree.problem();
  for (const TreeNode& n : tree.nodes())
    rec.nodes.push_back(NodeRow{n.id, n.parent, n.action_text, marker_name(n.marker)});
  rec.gold_node_ids = std::move(gold_node_ids);
  rec.meta = meta;
  return rec;
}

SearchTree TreeRecord::to_tree() const {
  if (nodes.empty() || nodes.front().id != 0 || nodes.front().parent != kNoParent)
    throw std::runtime_error("tree record: first row must be the root");
  SearchTree tree(problem_text);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const NodeRow& row = nodes[i];
    if (row.id != static_cast<NodeId>(i))
      throw std::runtime_error("tree record: ids must be dense and in order");
    auto marker = marker_from_token("[" + row.marker + "]");
    if (!marker) throw std::runtime_error("tree record: bad marker " + row.marker);
    NodeId id = tree.add_child(row.parent, row.action, *marker);
    if (id != row.id) throw std::runtime_error("tree record: id mismatch");
  }
  return tree;
}

std::string tree_record_to_json(const TreeRecord& r) {
  json j;
  j["tree_id"] = r.tree_id;
  j["task"] = r.task;
  j["problem_text"] = r.problem_text;
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    json row;
    row["id"] = n.id;
    row["parent"] = n.parent;
    row["action"] = n.action;
    row["marker"] = n.marker;
    nodes.push_back(std::move(row));
  }
  j["nodes"] = std::move(nodes);
  j["gold_node_ids"] = r.gold_node_ids;
  j["meta"] = {{"k", r.meta.k},
               {"temperature", r.meta.temperature},
               {"reward_preset", r.meta.reward_preset},
               {"seed", r.meta.seed},
               {"gold_pinned", r.meta.gold_pinned}};
  return j.dump();
}

TreeRecord tree_record_from_json(const std::string& line) {
  json j = json::parse(line);
  TreeRecord r;
  r.tree_id = j.at("tree_id").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.problem_text = j.at("problem_text").get<std::string>();
  for (const auto& row : j.at("nodes"))
    r.nodes.push_back(NodeRow{row.at("id").get<NodeId>(),
                              row.at("parent").get<NodeId>(),
                              row.at("action").get<std::string>(),
                              row.at("marker").get<std::string>()});
  r.gold_node_ids = j.at("gold_node_ids").get<std::vector<NodeId>>();
  const auto& m = j.at("meta");
  r.meta.k = m.at("k").get<int>();
  r.meta.temperature = m.at("temperature").get<double>();
  r.meta.reward_preset = m.at("reward_preset").get<std::string>();
  r.meta.seed = m.at("seed").get<std::uint64_t>();
  r.meta.gold_pinned = m.at("gold_pinned").get<bool>();
  return r;
}

std::string example_to_json(const TrainingExample& ex) {
  json j;
  j["tree_id"] = ex.tree_id;
  j["node_id"] = ex.node_id;
  j["context"] = ex.context;
  j["target"] = ex.target;
  return j.dump();
}

TrainingExample example_from_json(const std::string& line) {
  json j = json::parse(line);
  TrainingExample ex;
  ex.tree_id = j.at("tree_id").get<std::string>();
  ex.node_id = j.at("node_id").get<NodeId>();
  ex.context = j.at("context").get<std::string>();
  ex.target = j.at("target").get<std::string>();
  return ex;
}

std::string result_to_json(const ResultRecord& r) {
  json j;
  j["instance_id"] = r.instance_id;
  j["method"] = r.method;
  j["k"] = r.k;
  j["verdict"] = r.verdict;
  j["candidate_rank"] = r.candidate_rank;
  json pass = json::object();
  for (const auto& [k, ok] : r.pass_at) pass[std::to_string(k)] = ok;
  j["pass_at"] = std::move(pass);
  j["stats"] = {{"model_calls", r.stats.model_calls},
                {"tokens_generated", r.stats.tokens_generated},
                {"nodes_expanded", r.stats.nodes_expanded},
                {"terminals_verified", r.stats.terminals_verified},
                {"wall_time_ms", r.stats.wall_ms}};
  j["config"] = r.config_fingerprint;
  j["error"] = r.error;
  return j.dump();
}

ResultRecord result_from_json(const std::string& line) {
  json j = json::parse(line);
  ResultRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.k = j.at("k").get<int>();
  r.verdict = j.at("verdict").get<std::string>();
  r.candidate_rank = j.at("candidate_rank").get<int>();
  for (auto it = j.at("pass_at").begin(); it != j.at("pass_at").end(); ++it)
    r.pass_at[std::stoi(it.key())] = it.value().get<bool>();
  const auto& s = j.at("stats");
  r.stats.model_calls = s.at("model_calls").get<std::uint64_t>();
  r.stats.tokens_generated = s.at("tokens_generated").get<std::uint64_t>();
  r.stats.nodes_expanded = s.at("nodes_expanded").get<std::uint64_t>();
  r.stats.terminals_verified = s.at("terminals_verified").get<std::uint64_t>();
  r.stats.wall_ms = s.at("wall_time_ms").get<double>();
  r.config_fingerprint = j.at("config").get<std::string>();
  r.error = j.at("error").get<std::string>();
  return r;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const std::string& line : lines) out << line << "\n";
}

}  // namespace tslm
