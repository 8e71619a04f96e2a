#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "openlex/store/store.hpp"

namespace openlex::analytics {

/// Sort-based median; the mean of the two middle values for even sizes.
/// Throws UndefinedInput on an empty input.
double median(std::vector<double> values);

/// Subject-matter filters for case analytics.
enum class Topic {
  kAll,
  /// Immigration files: a secondary citation (docket) starting "IMM-", or an
  /// IMM- docket number within the first 2,000 code points of the English text.
  kImmigration,
};
std::optional<Topic> parse_topic(std::string_view s);  // "all", "imm"
std::string_view to_string(Topic t);
bool matches_topic(const DocumentRecord& r, Topic t);

/// Decisions of `dataset` with English text, in scan order, optionally
/// narrowed by topic and by primary date (inclusive).
std::vector<const DocumentRecord*> select_cases(const CorpusSnapshot& snap, std::string_view dataset, Topic topic,
                                                std::optional<Date> from = std::nullopt,
                                                std::optional<Date> to = std::nullopt);

/// Number formatting shared by the text reports: integers without a decimal
/// point, other values with two decimals.
std::string format_number(double v);

// ---- readability -----------------------------------------------------------

struct YearReadability {
  int year = 0;
  std::optional<double> median;  // empty: no scorable decisions that year
  std::size_t decisions = 0;
};

/// Median Flesch reading ease of English decision text per calendar year of
/// the primary date. Decisions whose English text has no words are left out.
/// Throws InvalidQuery for an unknown dataset or an inverted year range.
std::vector<YearReadability> readability_trend(const CorpusSnapshot& snap, std::string_view dataset, int first_year,
                                               int last_year, Topic topic = Topic::kAll);

/// "year\tmedian\tn" rows; the median column reads "NA" for empty years.
std::string readability_tsv(const std::vector<YearReadability>& rows);

// ---- judges ----------------------------------------------------------------

/// Ordered header patterns used to find the presiding judge.
struct JudgePattern {
  std::string id;
  std::string regex;  // ECMAScript; group 1 holds the judge's name
  bool icase = false;
};

struct JudgePatterns {
  std::string version;
  std::size_t scan_codepoints = 2000;
  std::vector<JudgePattern> patterns;
  /// Filled by parse_judge_patterns; compiled on each call when empty.
  std::shared_ptr<const std::vector<std::regex>> compiled;
};

/// The pattern list shipped with the library (data/judge_patterns.json).
const JudgePatterns& default_judge_patterns();
JudgePatterns parse_judge_patterns(std::string_view json_text);  // throws ConfigError
JudgePatterns load_judge_patterns(const std::filesystem::path& path);

/// Uppercase surname (diacritics folded) from the first header line that a
/// pattern matches, trying patterns in order. Looks at the English text, then
/// the French. Empty when nothing matches.
std::optional<std::string> extract_judge(const DocumentRecord& r,
                                         const JudgePatterns& patterns = default_judge_patterns());
std::optional<std::string> extract_judge_from_text(std::string_view text,
                                                   const JudgePatterns& patterns = default_judge_patterns());

struct JudgeRow {
  std::string judge;
  double median_words = 0;
  std::size_t decisions = 0;

  bool operator==(const JudgeRow&) const = default;
};

struct JudgeTable {
  std::vector<JudgeRow> rows;  // ascending by median, then judge
  std::size_t decisions = 0;   // matched decisions, including unknown judges
  std::size_t unknown = 0;     // decisions with no recognizable judge
};

/// English word counts (text_metrics) grouped by extracted judge.
JudgeTable median_wordcount_by_judge(const CorpusSnapshot& snap, std::string_view dataset, Topic topic,
                                     std::optional<Date> from = std::nullopt, std::optional<Date> to = std::nullopt,
                                     const JudgePatterns& patterns = default_judge_patterns());

/// The `n` lowest then the `n` highest rows, in table order; the whole table
/// when it has at most 2n rows.
std::vector<JudgeRow> lowest_and_highest(const JudgeTable& table, std::size_t n = 5);

std::string judge_table_tsv(const std::vector<JudgeRow>& rows);

// ---- weekly volume ---------------------------------------------------------

struct WeekVolume {
  IsoWeek week;
  std::uint64_t words = 0;
  std::size_t decisions = 0;
};

struct YearVolume {
  int year = 0;  // ISO week-numbering year
  double median_weekly_words = 0;
  std::size_t weeks = 0;  // weeks of this year inside the covered range
};

struct WeeklyVolume {
  /// Every ISO week from the first to the last week with a decision; weeks
  /// without decisions are present with zero words.
  std::vector<WeekVolume> weeks;
  std::vector<YearVolume> years;
};

/// English word totals per ISO week of the primary date.
WeeklyVolume weekly_volume(const CorpusSnapshot& snap, std::string_view dataset, Topic topic = Topic::kAll);

std::string weekly_volume_tsv(const WeeklyVolume& v);  // "week\twords\tn"
std::string yearly_volume_tsv(const WeeklyVolume& v);  // "year\tmedian_weekly_words\tweeks"

}  // namespace openlex::analytics
