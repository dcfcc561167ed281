#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Small UTF-8 toolbox. Covers what web text in Latin-script languages needs;
// not a general Unicode library.

namespace harvest::uni {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the code point starting at byte i and advances i past it.
// Invalid sequences (overlong, truncated, surrogate, out of range) yield
// U+FFFD and advance by one byte.
char32_t decode(std::string_view s, std::size_t& i);

void append_utf8(std::string& out, char32_t cp);

std::size_t codepoint_count(std::string_view s);

// Re-encodes with every invalid sequence replaced by U+FFFD.
std::string sanitize_utf8(std::string_view s);

bool valid_utf8(std::string_view s);

// Whitespace in the sense of Unicode (includes NBSP, ideographic space, ...).
bool is_space(char32_t cp);

bool is_space_only(std::string_view s);

// Letters and digits of the Latin, Greek and Cyrillic ranges plus combining
// marks; everything else counts as punctuation for tokenization purposes.
bool is_word_char(char32_t cp);

char32_t to_lower(char32_t cp);

std::string to_lower_utf8(std::string_view s);

std::string_view strip(std::string_view s);

// Collapses every whitespace run to a single ' ' and trims the ends.
std::string collapse_to_single_spaces(std::string_view s);

}  // namespace harvest::uni
