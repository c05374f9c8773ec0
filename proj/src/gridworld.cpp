#include "tslm/gridworld.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tslm/rng.hpp"

namespace tslm {

namespace {

constexpr std::uint64_t kCountCap = 1ull << 60;

const char* kDirNames[4] = {"up", "down", "left", "right"};
const int kDx[4] = {0, 0, -1, 1};
const int kDy[4] = {1, -1, 0, 0};

int dir_index(std::string_view name) {
  for (int d = 0; d < 4; ++d)
    if (name == kDirNames[d]) return d;
  return -1;
}

const GridState& as_state(const State& s) {
  return std::any_cast<const GridState&>(s);
}

struct Grid {
  int w = 0, h = 0;
  std::vector<char> wall;
  bool in_bounds(Coord c) const { return c.x >= 0 && c.x < w && c.y >= 0 && c.y < h; }
  bool blocked(Coord c) const { return wall[static_cast<std::size_t>(c.y * w + c.x)]; }
  bool open(Coord c) const { return in_bounds(c) && !blocked(c); }
  std::size_t idx(Coord c) const { return static_cast<std::size_t>(c.y * w + c.x); }
};

Grid make_grid(const GridworldSpec& spec) {
  Grid g{spec.width, spec.height,
         std::vector<char>(static_cast<std::size_t>(spec.width * spec.height), 0)};
  for (Coord c : spec.walls)
    if (g.in_bounds(c)) g.wall[g.idx(c)] = 1;
  return g;
}

struct BfsResult {
  std::vector<int> dist;            // -1 unreachable
  std::vector<std::uint64_t> count; // saturating shortest-path counts
};

BfsResult bfs_counts(const Grid& g, Coord src) {
  BfsResult r;
  r.dist.assign(static_cast<std::size_t>(g.w * g.h), -1);
  r.count.assign(static_cast<std::size_t>(g.w * g.h), 0);
  if (!g.open(src)) return r;
  r.dist[g.idx(src)] = 0;
  r.count[g.idx(src)] = 1;
  std::deque<Coord> queue{src};
  while (!queue.empty()) {
    Coord u = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      Coord v{u.x + kDx[d], u.y + kDy[d]};
      if (!g.open(v)) continue;
      std::size_t ui = g.idx(u), vi = g.idx(v);
      if (r.dist[vi] == -1) {
        r.dist[vi] = r.dist[ui] + 1;
        r.count[vi] = r.count[ui];
        queue.push_back(v);
      } else if (r.dist[vi] == r.dist[ui] + 1) {
        std::uint64_t sum = r.count[vi] + r.count[ui];
        r.count[vi] = std::min(sum, kCountCap);
      }
    }
  }
  return r;
}

std::string coord_str(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

std::optional<Coord> parse_coord(std::string_view t) {
  if (t.size() < 5 || t.front() != '(' || t.back() != ')') return std::nullopt;
  std::string body(t.substr(1, t.size() - 2));
  std::size_t comma = body.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    return Coord{std::stoi(body.substr(0, comma)), std::stoi(body.substr(comma + 1))};
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

GridworldSpec gridworld_generate(int width, int height, double wall_density,
                                 std::uint64_t seed, int max_rounds) {
  if (width < 2 || height < 2)
    throw MalformedProblem("gridworld needs width,height >= 2");
  Rng rng(mix_seed(0x6d17a11ull, seed));
  GridworldSpec spec;
  spec.width = width;
  spec.height = height;
  spec.start = Coord{0, 0};
  spec.goal = Coord{width - 1, height - 1};

  for (int round = 0; round < max_rounds; ++round) {
    Grid g{width, height,
           std::vector<char>(static_cast<std::size_t>(width * height), 0)};
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        Coord c{x, y};
        if (c == spec.start || c == spec.goal) continue;
        if (rng.chance(wall_density)) g.wall[g.idx(c)] = 1;
      }

    bool stuck = false;
    for (int iter = 0; iter <= width * height && !stuck; ++iter) {
      BfsResult from_start = bfs_counts(g, spec.start);
      if (from_start.dist[g.idx(spec.goal)] == -1) {
        stuck = true;
        break;
      }
      std::uint64_t total = from_start.count[g.idx(spec.goal)];
      if (total == 1) {
        spec.walls.clear();
        for (int y = 0; y < height; ++y)
          for (int x = 0; x < width; ++x)
            if (g.wall[g.idx(Coord{x, y})]) spec.walls.push_back(Coord{x, y});
        return spec;
      }
      BfsResult from_goal = bfs_counts(g, spec.goal);
      int full = from_start.dist[g.idx(spec.goal)];
      std::vector<Coord> tie_cells;
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
          Coord c{x, y};
          if (c == spec.start || c == spec.goal || !g.open(c)) continue;
          std::size_t i = g.idx(c);
          if (from_start.dist[i] == -1 || from_goal.dist[i] == -1) continue;
          if (from_start.dist[i] + from_goal.dist[i] != full) continue;
          unsigned __int128 through = static_cast<unsigned __int128>(from_start.count[i]) *
                                      from_goal.count[i];
          if (through < total) tie_cells.push_back(c);
        }
      if (tie_cells.empty()) {
        stuck = true;
        break;
      }
      g.wall[g.idx(tie_cells[static_cast<std::size_t>(rng.below(tie_cells.size()))])] = 1;
    }
  }
  throw GenerationBudgetExceeded();
}

std::vector<std::string> gridworld_shortest_path(const GridworldSpec& spec) {
  Grid g = make_grid(spec);
  BfsResult from_goal = bfs_counts(g, spec.goal);
  if (!g.open(spec.start) || from_goal.dist[g.idx(spec.start)] == -1)
    throw Unreachable();
  std::vector<std::string> path;
  Coord pos = spec.start;
  while (pos != spec.goal) {
    for (int d = 0; d < 4; ++d) {
      Coord next{pos.x + kDx[d], pos.y + kDy[d]};
      if (!g.open(next)) continue;
      if (from_goal.dist[g.idx(next)] == from_goal.dist[g.idx(pos)] - 1) {
        path.emplace_back(kDirNames[d]);
        pos = next;
        break;
      }
    }
  }
  return path;
}

std::uint64_t shortest_path_count(const GridworldSpec& spec) {
  Grid g = make_grid(spec);
  BfsResult from_start = bfs_counts(g, spec.start);
  if (!g.open(spec.goal) || from_start.dist[g.idx(spec.goal)] == -1) return 0;
  return from_start.count[g.idx(spec.goal)];
}

std::string gridworld_render_problem(const GridworldSpec& spec) {
  std::string out = "Grid: " + std::to_string(spec.width) + " x " +
                    std::to_string(spec.height) + "\nWalls:";
  if (spec.walls.empty()) {
    out += " none";
  } else {
    for (Coord c : spec.walls) out += " " + coord_str(c);
  }
  out += "\nStart: " + coord_str(spec.start);
  out += "\nGoal: " + coord_str(spec.goal);
  return out;
}

GridworldSpec gridworld_parse_problem(std::string_view problem_text) {
  std::istringstream in{std::string(problem_text)};
  std::string grid_line, walls_line, start_line, goal_line;
  if (!std::getline(in, grid_line) || !std::getline(in, walls_line) ||
      !std::getline(in, start_line) || !std::getline(in, goal_line))
    throw MalformedProblem("expected 4 lines: Grid/Walls/Start/Goal");

  GridworldSpec spec;
  {
    std::istringstream ls(grid_line);
    std::string tag, x;
    if (!(ls >> tag >> spec.width >> x >> spec.height) || tag != "Grid:" || x != "x")
      throw MalformedProblem("bad Grid line");
  }
  {
    std::istringstream ls(walls_line);
    std::string tag;
    ls >> tag;
    if (tag != "Walls:") throw MalformedProblem("bad Walls line");
    std::string tok;
    while (ls >> tok) {
      if (tok == "none") break;
      auto c = parse_coord(tok);
      if (!c) throw MalformedProblem("bad wall coordinate \"" + tok + "\"");
      spec.walls.push_back(*c);
    }
    std::sort(spec.walls.begin(), spec.walls.end());
  }
  auto parse_tagged = [](const std::string& line, std::string_view tag) {
    std::istringstream ls(line);
    std::string t, c;
    if (!(ls >> t >> c) || t != tag)
      throw MalformedProblem("bad " + std::string(tag) + " line");
    auto coord = parse_coord(c);
    if (!coord) throw MalformedProblem("bad coordinate \"" + c + "\"");
    return *coord;
  };
  spec.start = parse_tagged(start_line, "Start:");
  spec.goal = parse_tagged(goal_line, "Goal:");
  if (spec.width < 1 || spec.height < 1) throw MalformedProblem("bad grid size");
  return spec;
}

State GridworldTask::initial_state(std::string_view problem_text) const {
  auto spec = std::make_shared<GridworldSpec>(gridworld_parse_problem(problem_text));
  Grid g = make_grid(*spec);
  if (!g.open(spec->start) || !g.open(spec->goal))
    throw MalformedProblem("start or goal sits on a wall");
  auto dist = std::make_shared<std::vector<int>>(bfs_counts(g, spec->goal).dist);
  return GridState{spec, dist, spec->start, 0};
}

int GridworldTask::max_depth(const State& initial) const {
  const GridState& s = as_state(initial);
  const Grid g = make_grid(*s.spec);
  int d = (*s.dist_to_goal)[g.idx(s.spec->start)];
  return d < 0 ? 0 : d;
}

std::vector<std::string> GridworldTask::legal_actions(const State& st) const {
  const GridState& s = as_state(st);
  if (s.pos == s.spec->goal) throw TerminalState();
  Grid g = make_grid(*s.spec);
  std::vector<std::string> out;
  for (int d = 0; d < 4; ++d) {
    Coord next{s.pos.x + kDx[d], s.pos.y + kDy[d]};
    if (g.open(next)) out.emplace_back(kDirNames[d]);
  }
  return out;
}

State GridworldTask::transition(const State& st, std::string_view action) const {
  const GridState& s = as_state(st);
  int d = dir_index(action);
  if (d < 0) throw IllegalAction(std::string(action));
  Coord next{s.pos.x + kDx[d], s.pos.y + kDy[d]};
  Grid g = make_grid(*s.spec);
  if (s.pos == s.spec->goal || !g.open(next)) throw IllegalAction(std::string(action));
  return GridState{s.spec, s.dist_to_goal, next, s.steps + 1};
}

bool GridworldTask::is_goal(const State& st) const {
  const GridState& s = as_state(st);
  return s.pos == s.spec->goal;
}

bool GridworldTask::is_terminal(const State& st) const {
  const GridState& s = as_state(st);
  if (s.pos == s.spec->goal) return true;
  Grid g = make_grid(*s.spec);
  for (int d = 0; d < 4; ++d)
    if (g.open(Coord{s.pos.x + kDx[d], s.pos.y + kDy[d]})) return false;
  return true;  // boxed in
}

std::optional<std::string> GridworldTask::parse_action(std::string_view text,
                                                       const State& st) const {
  const GridState& s = as_state(st);
  // Tolerate surrounding whitespace from model output.
  std::string word;
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n') word += c;
  int d = dir_index(word);
  if (d < 0) return std::nullopt;
  Grid g = make_grid(*s.spec);
  Coord next{s.pos.x + kDx[d], s.pos.y + kDy[d]};
  if (s.pos == s.spec->goal || !g.open(next)) return std::nullopt;
  return std::string(kDirNames[d]);
}

bool GridworldTask::validate_solution(std::string_view problem,
                                      const NodePath& path) const {
  State st;
  try {
    st = initial_state(problem);
  } catch (const MalformedProblem&) {
    return false;
  }
  int shortest = max_depth(st);
  if (static_cast<int>(path.size()) != shortest) return false;
  State cur = st;
  for (const PathStep& step : path) {
    auto canonical = parse_action(step.action_text, cur);
    if (!canonical) return false;
    cur = transition(cur, *canonical);
  }
  return is_goal(cur);
}

std::optional<std::string> GridworldTask::gold_action(const State& st,
                                                      int remaining) const {
  const GridState& s = as_state(st);
  if (s.pos == s.spec->goal || remaining <= 0) return std::nullopt;
  Grid g = make_grid(*s.spec);
  for (int d = 0; d < 4; ++d) {
    Coord next{s.pos.x + kDx[d], s.pos.y + kDy[d]};
    if (!g.open(next)) continue;
    int dist = (*s.dist_to_goal)[g.idx(next)];
    if (dist >= 0 && dist <= remaining - 1) return std::string(kDirNames[d]);
  }
  return std::nullopt;
}

bool GridworldTask::reachable_within(const State& st, int remaining) const {
  const GridState& s = as_state(st);
  Grid g = make_grid(*s.spec);
  int dist = (*s.dist_to_goal)[g.idx(s.pos)];
  return dist >= 0 && dist <= remaining;
}

Marker GridworldTask::classify(const State& st, int depth, int depth_budget) const {
  if (is_goal(st)) return Marker::Goal;
  if (is_terminal(st) || depth >= depth_budget) return Marker::Fail;
  if (!reachable_within(st, depth_budget - depth)) return Marker::Fail;
  return Marker::Sep;
}

}  // namespace tslm
