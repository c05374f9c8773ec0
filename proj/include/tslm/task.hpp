#pragma once

#include <any>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tslm/tree.hpp"

namespace tslm {

using State = std::any;

struct MalformedProblem : std::runtime_error {
  explicit MalformedProblem(const std::string& what)
      : std::runtime_error("malformed problem: " + what) {}
};
struct IllegalAction : std::runtime_error {
  explicit IllegalAction(const std::string& action)
      : std::runtime_error("illegal action: \"" + action + "\"") {}
};
struct TerminalState : std::runtime_error {
  TerminalState() : std::runtime_error("state is terminal; no legal actions") {}
};
struct MalformedEquation : std::runtime_error {
  explicit MalformedEquation(const std::string& what)
      : std::runtime_error("malformed equation: " + what) {}
};

// Pluggable environment. Actions cross this interface in their canonical
// string rendering; parse_action maps free-form model text back onto a legal
// action (or nothing), so render/parse are mutually inverse on legal actions.
class TaskSpec {
 public:
  virtual ~TaskSpec() = default;

  virtual std::string name() const = 0;

  virtual State initial_state(std::string_view problem_text) const = 0;

  // Search depth budget for the instance rooted at `initial`.
  virtual int max_depth(const State& initial) const = 0;

  // Deterministic canonical order; throws TerminalState on terminal states.
  virtual std::vector<std::string> legal_actions(const State& s) const = 0;

  virtual State transition(const State& s, std::string_view action) const = 0;

  virtual bool is_goal(const State& s) const = 0;
  virtual bool is_terminal(const State& s) const = 0;

  // Canonical rendering of `text` if it denotes a legal action in `s`.
  virtual std::optional<std::string> parse_action(std::string_view text,
                                                  const State& s) const = 0;

  virtual bool validate_solution(std::string_view problem,
                                 const NodePath& path) const = 0;

  // Number of leading lines of the rendered problem text (context parsing).
  virtual int problem_line_count() const = 0;

  // First canonical action from which the goal stays reachable within
  // `remaining` steps; nullopt if the state is a dead end.
  virtual std::optional<std::string> gold_action(const State& s,
                                                 int remaining) const = 0;

  virtual bool reachable_within(const State& s, int remaining) const = 0;

  // Marker the task's predefined search tree assigns to a node holding `s`
  // at `depth`. Default: Goal / terminal-or-depth-capped Fail / Sep.
  virtual Marker classify(const State& s, int depth, int depth_budget) const {
    if (is_goal(s)) return Marker::Goal;
    if (is_terminal(s) || depth >= depth_budget) return Marker::Fail;
    return Marker::Sep;
  }
};

std::shared_ptr<const TaskSpec> make_task(std::string_view name);

}  // namespace tslm
