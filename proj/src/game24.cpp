#include "tslm/game24.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "tslm/rng.hpp"

namespace tslm {

namespace {

const Rational kTarget(24);

const Game24State& as_state(const State& s) {
  return std::any_cast<const Game24State&>(s);
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<Rational> apply_op(char op, const Rational& a, const Rational& b) {
  switch (op) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    case '/':
      if (b == Rational(0)) return std::nullopt;
      return a / b;
    default: return std::nullopt;
  }
}

std::string render_equation(const Rational& a, char op, const Rational& b,
                            const Rational& result) {
  std::string out = format_rational(a);
  out += ' ';
  out += op;
  out += ' ';
  out += format_rational(b);
  out += " = ";
  out += format_rational(result);
  return out;
}

struct ParsedEquation {
  Rational lhs_a, lhs_b, result;
  char op = '+';
};

// Accepts canonical "a op b = c" plus compact spellings and the unicode
// multiplication/division glyphs.
std::optional<ParsedEquation> parse_equation(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    // Map U+00D7 and U+00F7 onto ASCII.
    if (i + 1 < text.size() && static_cast<unsigned char>(text[i]) == 0xC3 &&
        static_cast<unsigned char>(text[i + 1]) == 0x97) {
      s += '*';
      i += 2;
    } else if (i + 1 < text.size() && static_cast<unsigned char>(text[i]) == 0xC3 &&
               static_cast<unsigned char>(text[i + 1]) == 0xB7) {
      s += '/';
      i += 2;
    } else if (text[i] == ' ' || text[i] == '\t') {
      ++i;
    } else {
      s += text[i];
      ++i;
    }
  }
  std::size_t eq = s.find('=');
  if (eq == std::string::npos || eq + 1 >= s.size()) return std::nullopt;
  std::string lhs = s.substr(0, eq);
  std::string rhs = s.substr(eq + 1);
  if (lhs.empty() || rhs.find('=') != std::string::npos) return std::nullopt;

  // Operator scan starts at 1 so a leading minus reads as a sign.
  std::size_t op_pos = std::string::npos;
  char op = 0;
  for (std::size_t i = 1; i < lhs.size(); ++i) {
    char c = lhs[i];
    if (c == '+' || c == '*' || c == '/') {
      op_pos = i;
      op = c;
      break;
    }
    if (c == '-') {
      // Not a sign if the previous char is a digit (e.g. "9-15").
      char prev = lhs[i - 1];
      if ((prev >= '0' && prev <= '9')) {
        op_pos = i;
        op = c;
        break;
      }
    }
  }
  if (op_pos == std::string::npos) return std::nullopt;

  auto a = parse_rational(lhs.substr(0, op_pos));
  auto b = parse_rational(lhs.substr(op_pos + 1));
  auto c = parse_rational(rhs);
  if (!a || !b || !c) return std::nullopt;
  return ParsedEquation{*a, *b, *c, op};
}

// Removes the pair (a, b) from the multiset and inserts the result.
std::optional<Game24State> step(const Game24State& s, const Rational& a, char op,
                                const Rational& b, const Rational& result,
                                const std::string& equation) {
  auto nums = s.numbers;
  auto ita = std::find(nums.begin(), nums.end(), a);
  if (ita == nums.end()) return std::nullopt;
  nums.erase(ita);
  auto itb = std::find(nums.begin(), nums.end(), b);
  if (itb == nums.end()) return std::nullopt;
  nums.erase(itb);
  auto actual = apply_op(op, a, b);
  if (!actual || *actual != result) return std::nullopt;
  nums.insert(std::upper_bound(nums.begin(), nums.end(), result), result);
  Game24State next{std::move(nums), s.history};
  next.history.push_back(equation);
  return next;
}

bool solvable_impl(std::vector<Rational>& nums) {
  if (nums.size() == 1) return nums[0] == kTarget;
  for (std::size_t i = 0; i < nums.size(); ++i) {
    for (std::size_t j = i + 1; j < nums.size(); ++j) {
      Rational a = nums[i], b = nums[j];
      nums.erase(nums.begin() + static_cast<long>(j));
      nums.erase(nums.begin() + static_cast<long>(i));
      for (char op : {'+', '-', '*', '/'}) {
        for (int orient = 0; orient < ((op == '-' || op == '/') ? 2 : 1); ++orient) {
          Rational x = orient ? b : a, y = orient ? a : b;
          auto r = apply_op(op, x, y);
          if (!r) continue;
          nums.push_back(*r);
          bool ok = solvable_impl(nums);
          nums.pop_back();
          if (ok) return true;
        }
      }
      nums.insert(nums.begin() + static_cast<long>(i), a);
      nums.insert(nums.begin() + static_cast<long>(j), b);
    }
  }
  return false;
}

}  // namespace

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::optional<Rational> parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  std::size_t slash = s.find('/');
  auto parse_int = [](std::string_view v) -> std::optional<long long> {
    if (v.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (v[0] == '-' || v[0] == '+') {
      neg = v[0] == '-';
      i = 1;
    }
    if (i >= v.size()) return std::nullopt;
    long long out = 0;
    for (; i < v.size(); ++i) {
      if (v[i] < '0' || v[i] > '9') return std::nullopt;
      if (out > (std::numeric_limits<long long>::max() - 9) / 10) return std::nullopt;
      out = out * 10 + (v[i] - '0');
    }
    return neg ? -out : out;
  };
  if (slash == std::string::npos) {
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rational(*n);
  }
  auto n = parse_int(s.substr(0, slash));
  auto d = parse_int(s.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return Rational(*n, *d);
}

std::vector<std::string> game24_actions(const Game24State& s) {
  if (s.numbers.size() < 2) throw TerminalState();
  std::vector<std::string> out;
  auto push = [&](const Rational& a, char op, const Rational& b) {
    auto r = apply_op(op, a, b);
    if (!r) return;
    std::string eq = render_equation(a, op, b, *r);
    if (std::find(out.begin(), out.end(), eq) == out.end()) out.push_back(std::move(eq));
  };
  for (std::size_t i = 0; i < s.numbers.size(); ++i) {
    for (std::size_t j = i + 1; j < s.numbers.size(); ++j) {
      const Rational& a = s.numbers[i];
      const Rational& b = s.numbers[j];
      push(a, '+', b);
      push(a, '-', b);
      push(b, '-', a);
      push(a, '*', b);
      push(a, '/', b);
      push(b, '/', a);
    }
  }
  return out;
}

bool game24_solvable(const std::vector<Rational>& numbers) {
  std::vector<Rational> nums = numbers;
  std::sort(nums.begin(), nums.end());
  return solvable_impl(nums);
}

bool game24_solvable_state(const Game24State& s) {
  std::vector<Rational> nums = s.numbers;
  return solvable_impl(nums);
}

namespace {

bool first_solution_impl(Game24State& s, std::vector<std::string>& out) {
  if (s.numbers.size() == 1) return s.numbers[0] == kTarget;
  for (const std::string& eq : game24_actions(s)) {
    auto parsed = parse_equation(eq);
    auto next = step(s, parsed->lhs_a, parsed->op, parsed->lhs_b, parsed->result, eq);
    out.push_back(eq);
    if (first_solution_impl(*next, out)) return true;
    out.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::vector<std::string>> game24_first_solution(
    const std::vector<Rational>& numbers) {
  Game24State s;
  s.numbers = numbers;
  std::sort(s.numbers.begin(), s.numbers.end());
  std::vector<std::string> out;
  if (first_solution_impl(s, out)) return out;
  return std::nullopt;
}

std::string game24_render_problem(const std::vector<Rational>& numbers) {
  std::string out = "Input:\n";
  for (std::size_t i = 0; i < numbers.size(); ++i) {
    if (i) out += ' ';
    out += format_rational(numbers[i]);
  }
  return out;
}

std::vector<Rational> game24_parse_problem(std::string_view problem_text) {
  std::string text(problem_text);
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || trim(header) != "Input:")
    throw MalformedProblem("expected \"Input:\" header");
  std::string line;
  if (!std::getline(in, line)) throw MalformedProblem("missing numbers line");
  std::istringstream nums(line);
  std::vector<Rational> out;
  std::string tok;
  while (nums >> tok) {
    auto r = parse_rational(tok);
    if (!r) throw MalformedProblem("bad number \"" + tok + "\"");
    out.push_back(*r);
  }
  if (out.size() < 2 || out.size() > 8)
    throw MalformedProblem("expected 2..8 numbers");
  return out;
}

Game24Instance game24_generate(std::uint64_t seed) {
  Rng rng(mix_seed(0x24246824ull, seed));
  Game24Instance inst;
  inst.seed = seed;
  for (int i = 0; i < 4; ++i)
    inst.numbers.emplace_back(static_cast<long long>(1 + rng.below(13)));
  inst.problem_text = game24_render_problem(inst.numbers);
  if (auto gold = game24_first_solution(inst.numbers)) {
    inst.solvable = true;
    inst.gold_path = *gold;
  }
  return inst;
}

State Game24Task::initial_state(std::string_view problem_text) const {
  Game24State s;
  s.numbers = game24_parse_problem(problem_text);
  std::sort(s.numbers.begin(), s.numbers.end());
  return s;
}

int Game24Task::max_depth(const State& initial) const {
  return static_cast<int>(as_state(initial).numbers.size()) - 1;
}

std::vector<std::string> Game24Task::legal_actions(const State& s) const {
  return game24_actions(as_state(s));
}

State Game24Task::transition(const State& s, std::string_view action) const {
  const Game24State& st = as_state(s);
  auto canonical = parse_action(action, s);
  if (!canonical) throw IllegalAction(std::string(action));
  auto parsed = parse_equation(*canonical);
  auto next = step(st, parsed->lhs_a, parsed->op, parsed->lhs_b, parsed->result,
                   *canonical);
  return *next;
}

bool Game24Task::is_goal(const State& s) const {
  const Game24State& st = as_state(s);
  return st.numbers.size() == 1 && st.numbers[0] == kTarget;
}

bool Game24Task::is_terminal(const State& s) const {
  return as_state(s).numbers.size() <= 1;
}

std::optional<std::string> Game24Task::parse_action(std::string_view text,
                                                    const State& s) const {
  const Game24State& st = as_state(s);
  if (st.numbers.size() < 2) return std::nullopt;
  auto parsed = parse_equation(text);
  if (!parsed) return std::nullopt;
  auto actual = apply_op(parsed->op, parsed->lhs_a, parsed->lhs_b);
  if (!actual || *actual != parsed->result) return std::nullopt;
  std::string canonical =
      render_equation(parsed->lhs_a, parsed->op, parsed->lhs_b, parsed->result);
  if (!step(st, parsed->lhs_a, parsed->op, parsed->lhs_b, parsed->result, canonical))
    return std::nullopt;  // operands not available in the multiset
  return canonical;
}

bool Game24Task::validate_solution(std::string_view problem,
                                   const NodePath& path) const {
  State s;
  try {
    s = initial_state(problem);
  } catch (const MalformedProblem&) {
    return false;
  }
  if (path.size() > static_cast<std::size_t>(max_depth(s))) return false;
  for (const PathStep& stepi : path) {
    if (is_terminal(s)) return false;
    auto canonical = parse_action(stepi.action_text, s);
    if (!canonical) return false;
    s = transition(s, *canonical);
  }
  return is_goal(s);
}

std::optional<std::string> Game24Task::gold_action(const State& s,
                                                   int /*remaining*/) const {
  const Game24State& st = as_state(s);
  if (st.numbers.size() < 2) return std::nullopt;
  for (const std::string& action : game24_actions(st)) {
    State next = transition(s, action);
    if (game24_solvable_state(as_state(next))) return action;
  }
  return std::nullopt;
}

bool Game24Task::reachable_within(const State& s, int /*remaining*/) const {
  return game24_solvable_state(as_state(s));
}

}  // namespace tslm
