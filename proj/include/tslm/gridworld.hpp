#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tslm/task.hpp"

namespace tslm {

struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

// x grows rightward, y upward; start defaults bottom-left, goal top-right.
struct GridworldSpec {
  int width = 0;
  int height = 0;
  std::vector<Coord> walls;  // sorted, impassable cells
  Coord start;
  Coord goal;
  bool operator==(const GridworldSpec&) const = default;
};

struct Unreachable : std::runtime_error {
  Unreachable() : std::runtime_error("goal unreachable from start") {}
};
struct GenerationBudgetExceeded : std::runtime_error {
  GenerationBudgetExceeded()
      : std::runtime_error("gridworld generation budget exceeded") {}
};

// Deterministic in seed. Samples a wall set at the given density, then walls
// off shortest-path tie cells until exactly one shortest path remains;
// resamples from scratch when the goal gets disconnected.
GridworldSpec gridworld_generate(int width, int height, double wall_density,
                                 std::uint64_t seed, int max_rounds = 200);

// The unique (or canonical-first) shortest action sequence start -> goal.
std::vector<std::string> gridworld_shortest_path(const GridworldSpec& spec);

// Number of distinct shortest paths, saturating at 2^60.
std::uint64_t shortest_path_count(const GridworldSpec& spec);

std::string gridworld_render_problem(const GridworldSpec& spec);
GridworldSpec gridworld_parse_problem(std::string_view problem_text);

struct GridState {
  std::shared_ptr<const GridworldSpec> spec;
  std::shared_ptr<const std::vector<int>> dist_to_goal;  // -1 = unreachable
  Coord pos;
  int steps = 0;
};

class GridworldTask final : public TaskSpec {
 public:
  std::string name() const override { return "gridworld"; }
  State initial_state(std::string_view problem_text) const override;
  int max_depth(const State& initial) const override;
  std::vector<std::string> legal_actions(const State& s) const override;
  State transition(const State& s, std::string_view action) const override;
  bool is_goal(const State& s) const override;
  bool is_terminal(const State& s) const override;
  std::optional<std::string> parse_action(std::string_view text,
                                          const State& s) const override;
  bool validate_solution(std::string_view problem,
                         const NodePath& path) const override;
  int problem_line_count() const override { return 4; }
  std::optional<std::string> gold_action(const State& s,
                                         int remaining) const override;
  bool reachable_within(const State& s, int remaining) const override;

  // Stricter than the default: moves that leave the goal unreachable within
  // the remaining budget are dead ends, which keeps search trees linear in
  // the path length instead of exponential in it.
  Marker classify(const State& s, int depth, int depth_budget) const override;
};

}  // namespace tslm
