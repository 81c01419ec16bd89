#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "emodeng/config.hpp"
#include "emodeng/pipeline.hpp"

namespace emodeng::test {

inline std::filesystem::path source_dir() { return EMODENG_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path fixture(const std::string& name) {
  return source_dir() / "tests" / "fixtures" / name;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

// Shipped configuration with the user tier redirected to `user_dic`.
inline PipelineConfig shipped_config(const std::filesystem::path& user_dic = {}) {
  PipelineConfig c = default_config(data_dir());
  if (!user_dic.empty())
    for (auto& t : c.tiers)
      if (t.name == kTierUser) t.files = {user_dic};
  return c;
}

// One pipeline per test binary; the modern lexicon is large.
inline const Pipeline& shipped_pipeline() {
  static const Pipeline p(shipped_config());
  return p;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("emodeng-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Random strings over letters and marks of printed 17th-century text.
inline std::string random_historical(std::mt19937& rng, std::size_t max_len = 60) {
  static const std::vector<std::string> alphabet{
      "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r",
      "s", "t", "u", "v", "w", "x", "y", "z", "A", "E", "I", "J", "U", "V", "W", "T", "S",
      "ſ", "&", "&c", " ", " ", " ", "  ", ",", ".", ";", ":", "'", "-", "vv", "VV", "æ", "œ",
      "é", "\n", "(", ")", "?", "!", "1", "7"};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t i = len(rng); i > 0; --i) s += alphabet[pick(rng)];
  return s;
}

}  // namespace emodeng::test
