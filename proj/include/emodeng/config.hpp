#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emodeng/lexicon.hpp"
#include "emodeng/typography.hpp"

namespace emodeng {

// The TOML subset used by emodeng.toml: [section] and [section.sub]
// headers, key = value with strings, integers, booleans and arrays of
// strings.
using ConfigValue = std::variant<bool, long long, std::string, std::vector<std::string>>;
using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

ConfigTable parse_config_table(std::string_view text, const std::string& source = {});

struct PipelineConfig {
  std::filesystem::path source;  // config file, empty when built in code
  std::vector<TierSource> tiers;  // highest priority first
  std::filesystem::path paradigms;
  std::filesystem::path abbreviations;
  std::filesystem::path morph_rules;
  int max_depth = 2;
  std::filesystem::path syntax_rules;
  bool rewrite_negation = false;
  TypographyConfig typography;
  std::filesystem::path store_dir;
  std::string addr = "127.0.0.1:8080";
  std::vector<std::filesystem::path> fixtures;  // documents for POST /api/rerun

  // First file of the user tier; accepted candidates are appended to it.
  std::filesystem::path user_dictionary() const;
};

// Relative paths resolve against `base_dir`.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::string& source = {});
// Throws ConfigError when the file is missing.
PipelineConfig load_config(const std::filesystem::path& path);
// The shipped layout under `data_dir`.
PipelineConfig default_config(const std::filesystem::path& data_dir);

// Throws ConfigError naming the first referenced file that does not exist.
void check_files(const PipelineConfig& config);

}  // namespace emodeng
