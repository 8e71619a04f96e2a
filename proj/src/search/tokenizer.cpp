#include "openlex/search/tokenizer.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "openlex/error.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex {

namespace {

template <typename Fn>
void for_each_word(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !text::is_space(text[j])) ++j;
    if (j > i) fn(text.substr(i, j - i));
    i = j;
  }
}

}  // namespace

std::uint64_t WordTokenizer::count(std::string_view text) const {
  std::uint64_t n = 0;
  for_each_word(text, [&](std::string_view) { ++n; });
  return n;
}

BpeTokenizer BpeTokenizer::from_merges(std::string_view table) {
  BpeTokenizer t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < table.size()) {
    std::size_t end = table.find('\n', pos);
    if (end == std::string_view::npos) end = table.size();
    std::string_view line = text::trim(table.substr(pos, end - pos));
    ++line_no;
    if (!line.empty() && line.front() != '#') {
      std::size_t sp = line.find_first_of(" \t");
      std::string_view left = line.substr(0, sp);
      std::string_view right = sp == std::string_view::npos ? std::string_view{} : text::trim(line.substr(sp));
      if (left.empty() || right.empty() || right.find_first_of(" \t") != std::string_view::npos)
        throw ParseError("merge table line " + std::to_string(line_no) + " is not \"left right\"", pos);
      t.ranks_.emplace(std::string(left) + ' ' + std::string(right), line_no);
    }
    pos = end + 1;
  }
  return t;
}

BpeTokenizer BpeTokenizer::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read merge table " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_merges(ss.str());
}

std::vector<std::string> BpeTokenizer::encode_word(std::string_view word) const {
  std::vector<std::string> sym;
  for (std::size_t pos = 0; pos < word.size();) {
    std::size_t start = pos;
    text::next_codepoint(word, pos);
    sym.emplace_back(word.substr(start, pos - start));
  }
  std::string key;
  for (;;) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::string best_left, best_right;
    for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
      key = sym[i] + ' ' + sym[i + 1];
      auto it = ranks_.find(key);
      if (it != ranks_.end() && it->second < best) {
        best = it->second;
        best_left = sym[i];
        best_right = sym[i + 1];
      }
    }
    if (best == std::numeric_limits<std::size_t>::max()) break;
    std::vector<std::string> merged;
    merged.reserve(sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i) {
      if (i + 1 < sym.size() && sym[i] == best_left && sym[i + 1] == best_right) {
        merged.push_back(sym[i] + sym[i + 1]);
        ++i;
      } else {
        merged.push_back(std::move(sym[i]));
      }
    }
    sym = std::move(merged);
  }
  return sym;
}

std::uint64_t BpeTokenizer::count(std::string_view text) const {
  std::uint64_t n = 0;
  for_each_word(text, [&](std::string_view w) { n += encode_word(w).size(); });
  return n;
}

std::uint64_t count_tokens(std::string_view text, const Tokenizer& tokenizer) {
  return tokenizer.count(text);
}

std::vector<std::string> tokenizer_schemes() { return {"word-fallback", "bpe"}; }

std::shared_ptr<const Tokenizer> make_tokenizer(std::string_view scheme,
                                                const std::filesystem::path& merges) {
  if (scheme == "word-fallback") return std::make_shared<WordTokenizer>();
  if (scheme == "bpe") {
    if (merges.empty()) throw ConfigError("tokenizer scheme bpe needs a merge table file");
    return std::make_shared<BpeTokenizer>(BpeTokenizer::from_file(merges));
  }
  throw ConfigError("unknown tokenizer scheme: " + std::string(scheme));
}

}  // namespace openlex
