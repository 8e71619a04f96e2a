#include "doctest.h"

#include <random>

#include "openlex/analytics/text_metrics.hpp"
#include "openlex/error.hpp"
#include "openlex/kernels/kernels.hpp"
#include "openlex/search/tokenizer.hpp"
#include "test_support.hpp"

using namespace openlex;
using namespace openlex::testing;

namespace {

const char* kMerges =
    "#version: test\n"
    "l o\n"
    "lo w\n"
    "e r\n"
    "low er\n"
    "i n\n"
    "in g\n";

std::string random_words(std::mt19937& rng, int n) {
  static const char* vocab[] = {"lowering", "the", "Court", "Mr.", "appeal.", "Is", "it?", "décision",
                                "v.", "para.", "12", "\"quoted.\"", "e.g.", "Yes!", "—", "(a)"};
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += (rng() % 5 == 0) ? "\n\t" : " ";
    s += vocab[rng() % std::size(vocab)];
  }
  return s;
}

}  // namespace

TEST_CASE("word-fallback counts whitespace-delimited words") {
  WordTokenizer w;
  CHECK(count_tokens("the cat sat", w) == 3);
  CHECK(count_tokens("", w) == 0);
  CHECK(count_tokens("  a\n\tb  ", w) == 2);
}

TEST_CASE("bpe applies merges by rank") {
  auto bpe = BpeTokenizer::from_merges(kMerges);
  // Hand application to "lowering":
  //   l o w e r i n g
  //   rank 2 (l o):   lo w e r i n g
  //   rank 3 (lo w):  low e r i n g
  //   rank 4 (e r):   low er i n g
  //   rank 5 (low er): lower i n g
  //   rank 6 (i n):   lower in g
  //   rank 7 (in g):  lower ing
  CHECK(bpe.encode_word("lowering") == std::vector<std::string>{"lower", "ing"});
  CHECK(count_tokens("lowering", bpe) == 2);
  CHECK(count_tokens("", bpe) == 0);
  CHECK(bpe.merge_count() == 6);
  CHECK(count_tokens("lowering low", bpe) == 3);
  CHECK(bpe.encode_word("été") == std::vector<std::string>{"é", "t", "é"});
  CHECK_THROWS_AS(BpeTokenizer::from_merges("a b c\n"), ParseError);
}

TEST_CASE("tokenizer registry") {
  CHECK(make_tokenizer("word-fallback")->name() == "word-fallback");
  CHECK_THROWS_AS(make_tokenizer("sentencepiece"), ConfigError);
  CHECK_THROWS_AS(make_tokenizer("bpe"), ConfigError);
  TempDir dir;
  write_text(dir / "merges.txt", kMerges);
  CHECK(make_tokenizer("bpe", dir / "merges.txt")->count("lowering") == 2);
}

TEST_CASE("token counts are monotone under concatenation") {
  std::mt19937 rng(1);
  auto bpe = BpeTokenizer::from_merges(kMerges);
  WordTokenizer w;
  for (int i = 0; i < 300; ++i) {
    auto a = random_words(rng, static_cast<int>(rng() % 12));
    auto b = random_words(rng, static_cast<int>(rng() % 12));
    for (const Tokenizer* t : {static_cast<const Tokenizer*>(&w), static_cast<const Tokenizer*>(&bpe)}) {
      auto ab = t->count(a + " " + b);
      CHECK(ab >= std::max(t->count(a), t->count(b)));
    }
  }
}

TEST_CASE("text metrics follow the stated counting rules") {
  CHECK(text_metrics("The cat sat.") == TextMetrics{3, 1, 3});
  CHECK(text_metrics("") == TextMetrics{0, 0, 0});
  CHECK(text_metrics("Mr. Justice Roy agreed.").sentences == 1);
  CHECK(text_metrics("See Smith v. Jones, para. 12. It failed.").sentences == 2);
  CHECK(text_metrics("He said \"No way.\" Then left").sentences == 2);
  CHECK(text_metrics("Is it? Yes! Fine").sentences == 3);
  CHECK(text_metrics("— (a) ...").words == 1);
  CHECK(count_syllables("cake") == 1);
  CHECK(count_syllables("table") == 2);
  CHECK(count_syllables("the") == 1);
  CHECK(count_syllables("rhythm") == 1);
  CHECK(count_syllables("reading") == 2);
  CHECK(count_syllables("2024") == 1);
  CHECK(count_syllables("décidée") == 3);
  CHECK(is_guarded_abbreviation("Mr."));
  CHECK(is_guarded_abbreviation("J."));
  CHECK(is_guarded_abbreviation("S.C."));
  CHECK_FALSE(is_guarded_abbreviation("sat."));
}

TEST_CASE("flesch reading ease") {
  CHECK(flesch_reading_ease("The cat sat.") == doctest::Approx(206.835 - 1.015 * 3 - 84.6 * 1));
  CHECK(flesch_reading_ease("The cat sat.") == doctest::Approx(119.19));
  CHECK_THROWS_AS(flesch_reading_ease(""), UndefinedInput);
  CHECK_THROWS_AS(flesch_reading_ease("... —"), UndefinedInput);
}

TEST_CASE("flesch is invariant under duplication and whitespace normalization") {
  std::mt19937 rng(2);
  for (int i = 0; i < 300; ++i) {
    auto t = random_words(rng, 1 + static_cast<int>(rng() % 30)) + ".";
    if (text_metrics(t).words == 0) continue;
    double base = flesch_reading_ease(t);
    CHECK(flesch_reading_ease(t + " " + t) == doctest::Approx(base));
    std::string spaced;
    for (char c : t) spaced += (c == ' ') ? std::string("  \n ") : std::string(1, c);
    CHECK(flesch_reading_ease(spaced) == doctest::Approx(base));
    auto m = text_metrics(t);
    CHECK(m.sentences >= 1);
  }
}

TEST_CASE("parallel kernels match the serial reference") {
  std::mt19937 rng(3);
  std::vector<std::string> docs;
  for (int i = 0; i < 500; ++i) docs.push_back(random_words(rng, static_cast<int>(rng() % 200)));
  std::vector<std::string_view> views(docs.begin(), docs.end());
  auto bpe = BpeTokenizer::from_merges(kMerges);
  CHECK(kernels::serial::text_metrics_batch(views) == kernels::parallel::text_metrics_batch(views));
  CHECK(kernels::serial::token_counts(views, bpe) == kernels::parallel::token_counts(views, bpe));
  CHECK(kernels::serial::extract_terms_batch(views) == kernels::parallel::extract_terms_batch(views));
  auto d = kernels::extract_terms("Refugee refugee RÉFUGIÉ claim");
  CHECK(d.length == 4);
  REQUIRE(d.counts.size() == 3);
  CHECK(d.counts[1] == std::pair<std::string, std::uint32_t>{"refugee", 2});
}
