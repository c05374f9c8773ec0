#include "tslm/tokens.hpp"

#include <array>

namespace tslm {

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
      out.emplace_back(kNewlineToken);
    } else if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string detokenize(const TokenSeq& tokens) {
  std::string out;
  bool prev_glues = true;  // no leading space
  for (const auto& t : tokens) {
    if (t == kNewlineToken) {
      out.push_back('\n');
      prev_glues = true;
      continue;
    }
    if (!prev_glues) out.push_back(' ');
    out += t;
    prev_glues = false;
  }
  return out;
}

namespace {
constexpr std::array<std::string_view, 5> kReserved = {
    kBosToken, kEosToken, kSepToken, kFailToken, kGoalToken};
}

bool is_reserved_token(std::string_view token) {
  for (auto r : kReserved)
    if (token == r) return true;
  return false;
}

bool is_marker_token(std::string_view token) {
  return token == kSepToken || token == kFailToken || token == kGoalToken;
}

bool contains_reserved_token(std::string_view text) {
  for (auto r : kReserved)
    if (text.find(r) != std::string_view::npos) return true;
  return false;
}

std::size_t count_tokens(std::string_view text) { return tokenize(text).size(); }

}  // namespace tslm
