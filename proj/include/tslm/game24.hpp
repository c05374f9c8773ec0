#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tslm/task.hpp"

namespace tslm {

// Exact arithmetic throughout: division makes fractions arise, and the
// "equals 24" check must not see floating point.
using Rational = boost::rational<long long>;

std::string format_rational(const Rational& r);
std::optional<Rational> parse_rational(std::string_view text);

struct Game24State {
  std::vector<Rational> numbers;  // ascending; size 4 down to 1
  std::vector<std::string> history;
};

// Canonical enumeration: unordered pairs over the ascending multiset in
// lexicographic position order; per pair a+b, a-b, b-a, a*b, a/b, b/a with
// zero divisors skipped; duplicate renderings dropped (first kept).
std::vector<std::string> game24_actions(const Game24State& s);

// Exhaustive depth-3 search; true iff some leaf equals 24 exactly.
bool game24_solvable(const std::vector<Rational>& numbers);
bool game24_solvable_state(const Game24State& s);

// First solution in canonical enumeration order, as equation strings.
std::optional<std::vector<std::string>> game24_first_solution(
    const std::vector<Rational>& numbers);

std::string game24_render_problem(const std::vector<Rational>& numbers);
std::vector<Rational> game24_parse_problem(std::string_view problem_text);

struct Game24Instance {
  std::uint64_t seed = 0;
  std::vector<Rational> numbers;
  std::string problem_text;
  std::vector<std::string> gold_path;  // empty when unsolvable
  bool solvable = false;
};

// Deterministic in seed; numbers drawn uniformly from [1, 13].
Game24Instance game24_generate(std::uint64_t seed);

class Game24Task final : public TaskSpec {
 public:
  std::string name() const override { return "game24"; }
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
  int problem_line_count() const override { return 2; }  // "Input:" + numbers
  std::optional<std::string> gold_action(const State& s,
                                         int remaining) const override;
  bool reachable_within(const State& s, int remaining) const override;
};

}  // namespace tslm
