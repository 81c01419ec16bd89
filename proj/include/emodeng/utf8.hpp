#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace emodeng::utf8 {

bool is_valid(std::string_view text);

// Length in bytes of the code point starting at text[pos] (1 for stray bytes).
std::size_t sequence_length(std::string_view text, std::size_t pos);

char32_t decode(std::string_view text, std::size_t pos);
std::string encode(char32_t cp);

// Letters for tokenization: ASCII letters and any non-ASCII code point that
// is not typographic punctuation.
bool is_letter(char32_t cp);

// ASCII-only case mapping; non-ASCII bytes pass through.
std::string lower(std::string_view s);
std::string upper_first(std::string_view s);
bool starts_upper(std::string_view s);

}  // namespace emodeng::utf8
