#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace emodeng {

struct TypographyConfig {
  bool long_s = true;     // ſ -> s
  bool ampersand = true;  // & -> and, &c -> etc.
  bool uv_repair = true;  // vnder -> under, haue -> have, vv -> w
  bool ij_repair = true;  // Iewes -> Jewes
  // Words (compared lowercased) exempt from u/v repair.
  std::vector<std::string> uv_exceptions{"vs", "queue", "louis", "bureau"};
  // Capitalized words exempt from I -> J.
  std::vector<std::string> ij_exceptions{"Io", "Ionia", "Ionian", "Ionians", "Ionic",
                                         "Iota", "Iowa", "Iago", "Ioannina"};
};

// Monotone map from byte offsets of the normalized text back to byte offsets
// of the original text.  Defined for every offset in [0, normalized size].
class OffsetMap {
 public:
  OffsetMap() : to_original_{0} {}
  explicit OffsetMap(std::vector<std::size_t> to_original)
      : to_original_(std::move(to_original)) {}

  // Identity map over a text of `size` bytes.
  static OffsetMap identity(std::size_t size);

  std::size_t to_original(std::size_t normalized_offset) const;
  std::size_t normalized_size() const { return to_original_.size() - 1; }
  const std::vector<std::size_t>& table() const { return to_original_; }

 private:
  std::vector<std::size_t> to_original_;
};

struct NormalizedText {
  std::string text;
  OffsetMap offsets;
};

// Character-level repair of 17th-century typography.  Idempotent: feeding
// the output back in returns it unchanged.  `text` must be valid UTF-8.
NormalizedText normalize_chars(std::string_view text, const TypographyConfig& config = {});

}  // namespace emodeng
