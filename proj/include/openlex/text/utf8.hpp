#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace openlex::text {

/// Decodes one code point starting at `pos` and advances `pos`. Invalid
/// sequences decode as U+FFFD and consume one byte.
char32_t next_codepoint(std::string_view s, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);

std::size_t codepoint_count(std::string_view s);
/// Byte length of the longest prefix holding at most `max_codepoints` code points.
std::size_t prefix_bytes(std::string_view s, std::size_t max_codepoints);
/// Largest byte index <= pos that starts a code point.
std::size_t floor_boundary(std::string_view s, std::size_t pos);

/// Lowercase with Latin diacritics removed ("Décision" -> "decision",
/// "Œuvre" -> "oeuvre"). Code points outside the Latin blocks pass through.
std::string fold(std::string_view s);
/// Folding of a single code point; empty when it is not a Latin letter or
/// ASCII character.
std::string_view fold_codepoint(char32_t cp);

std::string_view trim(std::string_view s);
/// Trim plus collapse of every internal whitespace run to one space.
std::string collapse_whitespace(std::string_view s);

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Calls `fn(term, byte_offset, byte_length)` for every search term in `s`:
/// maximal runs of ASCII letters/digits after folding. Offsets refer to the
/// original (unfolded) text.
template <typename Fn>
void for_each_term(std::string_view s, Fn&& fn) {
  std::string term;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t here = pos;
    char32_t cp = next_codepoint(s, pos);
    std::string_view f = fold_codepoint(cp);
    bool word = !f.empty();
    for (char c : f)
      if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) word = false;
    if (word) {
      if (term.empty()) start = here;
      term.append(f);
    } else if (!term.empty()) {
      fn(std::string_view(term), start, here - start);
      term.clear();
    }
  }
  if (!term.empty()) fn(std::string_view(term), start, s.size() - start);
}

}  // namespace openlex::text
