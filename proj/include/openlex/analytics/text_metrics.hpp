#pragma once

#include <cstdint>
#include <string_view>

namespace openlex {

struct TextMetrics {
  std::uint64_t words = 0;
  std::uint64_t sentences = 0;
  std::uint64_t syllables = 0;

  bool operator==(const TextMetrics&) const = default;
  TextMetrics& operator+=(const TextMetrics& o) {
    words += o.words;
    sentences += o.sentences;
    syllables += o.syllables;
    return *this;
  }
};

/// Counting rules:
///  - words: whitespace-delimited tokens that still contain a letter or digit
///    after punctuation is stripped from both ends;
///  - sentences: tokens ending in '.', '!' or '?' (closing quotes and
///    brackets allowed after the mark) that close a run of at least one word,
///    plus one for trailing words with no terminator. A '.' does not end a
///    sentence after a guarded abbreviation ("Mr.", "v.", "para.", ...), a
///    single letter ("J.") or a dotted form ("e.g.", "S.C.");
///  - syllables: vowel groups of [aeiouy] after diacritic folding, with a
///    trailing consonant+'e' not counted unless the word ends consonant+"le",
///    minimum 1 per word.
TextMetrics text_metrics(std::string_view text);

std::uint64_t count_syllables(std::string_view word);
bool is_guarded_abbreviation(std::string_view token);

/// 206.835 - 1.015 * words/sentences - 84.6 * syllables/words.
/// Throws UndefinedInput when there are no words.
double flesch_from_metrics(const TextMetrics& m);
double flesch_reading_ease(std::string_view text);

}  // namespace openlex
