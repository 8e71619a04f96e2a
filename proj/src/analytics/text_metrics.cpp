#include "openlex/analytics/text_metrics.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "openlex/error.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex {

namespace {

constexpr std::string_view kAbbreviations[] = {
    "mr",   "mrs",   "ms",  "messrs", "dr",  "st",  "j",   "jj",  "jja", "cj",  "v",
    "vs",   "no",    "nos", "para",   "paras", "etc", "inc", "ltd", "co", "corp", "art",
    "s",    "ss",    "cf",  "al",     "jr",  "sr",  "prof", "hon", "mme", "p",
};

bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

std::string_view strip_closers(std::string_view t) {
  for (;;) {
    bool stripped = false;
    for (std::string_view c : {"\"", "'", ")", "]", "\xC2\xBB", "\xE2\x80\x9D"}) {
      if (t.size() > c.size() && t.ends_with(c)) {
        t.remove_suffix(c.size());
        stripped = true;
      }
    }
    if (!stripped) return t;
  }
}

// Alphanumeric core of a folded token.
std::string_view core_of(std::string_view folded) {
  std::size_t b = 0, e = folded.size();
  while (b < e && !is_alnum(folded[b])) ++b;
  while (e > b && !is_alnum(folded[e - 1])) --e;
  return folded.substr(b, e - b);
}

}  // namespace

bool is_guarded_abbreviation(std::string_view token) {
  std::string folded = text::fold(token);
  std::string_view t = folded;
  while (!t.empty() && !is_alnum(t.front())) t.remove_prefix(1);
  if (!t.ends_with('.') || t.ends_with("..")) return false;
  t.remove_suffix(1);
  if (t.empty()) return false;
  for (char c : t)
    if (!is_alnum(c) && c != '.') return false;
  if (t.find('.') != std::string_view::npos) return true;
  if (t.size() == 1 && t[0] >= 'a' && t[0] <= 'z') return true;
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), t) != std::end(kAbbreviations);
}

std::uint64_t count_syllables(std::string_view word) {
  std::string folded = text::fold(word);
  std::string letters;
  for (char c : folded)
    if (c >= 'a' && c <= 'z') letters.push_back(c);
  std::uint64_t groups = 0;
  bool in_vowel = false;
  for (char c : letters) {
    bool v = is_vowel(c);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  std::size_t n = letters.size();
  if (groups > 1 && n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2])) {
    bool consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max<std::uint64_t>(groups, 1);
}

TextMetrics text_metrics(std::string_view text) {
  TextMetrics m;
  std::uint64_t open_words = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !text::is_space(text[j])) ++j;
    if (j == i) break;
    std::string_view token = text.substr(i, j - i);
    i = j;

    std::string folded = text::fold(token);
    std::string_view core = core_of(folded);
    if (!core.empty()) {
      ++m.words;
      ++open_words;
      m.syllables += count_syllables(core);
    }
    std::string_view tail = strip_closers(token);
    char last = tail.empty() ? '\0' : tail.back();
    bool terminator = last == '!' || last == '?' || (last == '.' && !is_guarded_abbreviation(tail));
    if (terminator && open_words > 0) {
      ++m.sentences;
      open_words = 0;
    }
  }
  if (open_words > 0) ++m.sentences;
  return m;
}

double flesch_from_metrics(const TextMetrics& m) {
  if (m.words == 0) throw UndefinedInput("reading ease is undefined for text with no words");
  double w = static_cast<double>(m.words);
  return 206.835 - 1.015 * (w / static_cast<double>(m.sentences)) -
         84.6 * (static_cast<double>(m.syllables) / w);
}

double flesch_reading_ease(std::string_view text) { return flesch_from_metrics(text_metrics(text)); }

}  // namespace openlex
