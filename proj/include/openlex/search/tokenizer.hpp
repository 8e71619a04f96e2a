#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace openlex {

/// Counts tokens for coverage statistics. Implementations are immutable and
/// safe to share across threads.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string name() const = 0;
  virtual std::uint64_t count(std::string_view text) const = 0;
};

/// "word-fallback": one token per whitespace-delimited word.
class WordTokenizer final : public Tokenizer {
 public:
  std::string name() const override { return "word-fallback"; }
  std::uint64_t count(std::string_view text) const override;
};

/// Byte-pair merges over code points. Each whitespace-delimited word starts
/// as a sequence of code points; the adjacent pair with the lowest rank is
/// merged everywhere in the word, repeatedly, until no listed pair remains.
class BpeTokenizer final : public Tokenizer {
 public:
  /// Merge table: one "left right" pair per line; rank is the line number.
  /// Blank lines and lines starting with '#' are skipped but still occupy a
  /// line number. Throws ParseError on a malformed line.
  static BpeTokenizer from_merges(std::string_view table);
  static BpeTokenizer from_file(const std::filesystem::path& path);

  std::string name() const override { return "bpe"; }
  std::uint64_t count(std::string_view text) const override;
  std::vector<std::string> encode_word(std::string_view word) const;
  std::size_t merge_count() const { return ranks_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> ranks_;  // "left right" -> rank
};

std::uint64_t count_tokens(std::string_view text, const Tokenizer& tokenizer);

/// Registered schemes: "word-fallback" and "bpe" (needs a merge table).
std::vector<std::string> tokenizer_schemes();
/// Throws ConfigError for an unknown scheme or a bpe request without merges.
std::shared_ptr<const Tokenizer> make_tokenizer(std::string_view scheme,
                                                const std::filesystem::path& merges = {});

}  // namespace openlex
