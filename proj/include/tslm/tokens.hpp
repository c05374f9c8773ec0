#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tslm {

// Whitespace tokenization with newline as a first-class token. The codec's
// correctness properties are tokenizer-agnostic; this keeps oracles exact.
using TokenSeq = std::vector<std::string>;

inline constexpr std::string_view kBosToken = "[BOS]";
inline constexpr std::string_view kEosToken = "[EOS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kFailToken = "[FAIL]";
inline constexpr std::string_view kGoalToken = "[GOAL]";
inline constexpr std::string_view kNewlineToken = "\n";

// Splits on spaces/tabs/CR; every '\n' becomes its own token.
TokenSeq tokenize(std::string_view text);

// Joins with single spaces, no space adjacent to newline tokens.
// tokenize(detokenize(ts)) == ts for any sequence of whitespace-free tokens
// and newline tokens.
std::string detokenize(const TokenSeq& tokens);

bool is_reserved_token(std::string_view token);
bool is_marker_token(std::string_view token);

// True when any of the five reserved tokens occurs as a substring.
bool contains_reserved_token(std::string_view text);

std::size_t count_tokens(std::string_view text);

}  // namespace tslm
