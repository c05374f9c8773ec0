#pragma once

#include <map>
#include <string>

namespace tslm {

// Flat key-value config: one "key = value" per line, '#' starts a comment,
// blank lines ignored. CLI flags override file values.
using Config = std::map<std::string, std::string>;

Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

// FNV-1a over the sorted "key=value" lines; embedded in every result record.
std::string config_fingerprint(const Config& resolved);

}  // namespace tslm
