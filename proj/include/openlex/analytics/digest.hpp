#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openlex/analytics/stats.hpp"

namespace openlex::analytics {

enum class Outcome { kAllowed, kDismissed, kOther };
std::string_view to_string(Outcome o);  // "allowed", "dismissed", "other"

struct Classification {
  Outcome outcome = Outcome::kOther;
  std::string category;  // application type, e.g. "Refugee protection"
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  virtual Classification classify(const DocumentRecord& r) const = 0;
};

/// Phrase lists over the folded text (English, else French). The outcome is
/// that of the last disposition phrase in the text, since the formal
/// judgment comes at the end; "other" when none occurs. The category is the
/// first matching application type, "Other" when none match.
class KeywordClassifier : public Classifier {
 public:
  std::string name() const override { return "keyword"; }
  Classification classify(const DocumentRecord& r) const override;

  static const std::vector<std::string>& allowed_phrases();
  static const std::vector<std::string>& dismissed_phrases();
};

struct CaseSummary {
  std::string citation;
  std::string name;
  std::optional<std::string> judge;  // uppercase surname
  std::string category;
  Outcome outcome = Outcome::kOther;
  std::uint64_t words = 0;
  std::string facts;
  std::string errors;
};

class Summarizer {
 public:
  virtual ~Summarizer() = default;
  virtual std::string name() const = 0;
  /// Fills `facts` and `errors` of an otherwise complete summary.
  virtual void summarize(const DocumentRecord& r, CaseSummary& summary) const = 0;
  /// One paragraph over all summaries (allowed ones first).
  virtual std::string key_themes(const std::vector<CaseSummary>& summaries) const = 0;
};

/// Extractive: facts are the first sentences that mention the applicant or
/// claimant (the opening sentences otherwise), errors the first sentences
/// naming an error ground. Capped at 60 words each.
class TemplateSummarizer : public Summarizer {
 public:
  std::string name() const override { return "template"; }
  void summarize(const DocumentRecord& r, CaseSummary& summary) const override;
  std::string key_themes(const std::vector<CaseSummary>& summaries) const override;
};

struct DigestMemo {
  std::string dataset;
  IsoWeek period;
  Topic topic = Topic::kAll;
  std::size_t decisions = 0;
  std::size_t allowed = 0;
  std::uint64_t words = 0;  // sum of the summaries' word counts
  std::string key_themes;
  std::vector<CaseSummary> summaries;  // by outcome (allowed first), category, citation
};

/// Cases of `dataset` whose primary date falls in `week`. English word counts
/// come from text_metrics.
DigestMemo weekly_digest(const CorpusSnapshot& snap, std::string_view dataset, IsoWeek week, Topic topic,
                         const Classifier& classifier, const Summarizer& summarizer);

/// Plain-text memorandum: title, Overview, Key themes, Case summaries.
std::string render_memo(const DigestMemo& memo);

/// Podcast script: intro with the period and totals, one segment per case
/// (its citation appears there and nowhere else), outro.
std::string digest_to_script(const DigestMemo& memo);

/// Occurrences of `citation` in `text` not directly preceded or followed by a
/// letter or digit, so "2025 FC 1" is not found inside "2025 FC 12".
std::size_t count_citation(std::string_view text, std::string_view citation);

}  // namespace openlex::analytics
