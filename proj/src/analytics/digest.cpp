#include "openlex/analytics/digest.hpp"

#include <algorithm>
#include <sstream>

#include "openlex/analytics/text_metrics.hpp"
#include "openlex/kernels/kernels.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::analytics {

namespace {

constexpr std::size_t kNoteWords = 60;

struct Category {
  const char* label;
  std::vector<const char*> phrases;
};

const std::vector<Category>& categories() {
  static const std::vector<Category> c = {
      {"Pre-removal risk assessment", {"pre-removal risk assessment", "prra"}},
      {"Humanitarian and compassionate", {"humanitarian and compassionate", "h&c"}},
      {"Refugee protection",
       {"refugee protection division", "refugee appeal division", "convention refugee", "refugee claim",
        "person in need of protection", "demande d'asile"}},
      {"Economic (work and study permits)", {"work permit", "study permit", "express entry", "provincial nominee"}},
      {"Temporary residence", {"temporary resident visa", "visitor visa"}},
      {"Family sponsorship", {"sponsorship", "spousal"}},
      {"Inadmissibility", {"inadmissib"}},
      {"Citizenship", {"citizenship judge", "grant of citizenship", "citizenship application"}},
  };
  return c;
}

const std::vector<std::pair<const char*, std::vector<const char*>>>& error_grounds() {
  static const std::vector<std::pair<const char*, std::vector<const char*>>> g = {
      {"procedural fairness", {"procedural fairness", "natural justice"}},
      {"treatment of the evidence", {"evidence"}},
      {"inadequate reasons", {"reasons are inadequate", "inadequate reasons", "insufficient reasons", "justification"}},
      {"unreasonableness", {"unreasonabl"}},
  };
  return g;
}

bool contains(const std::string& hay, std::string_view needle) { return hay.find(needle) != std::string::npos; }

std::string_view body_text(const DocumentRecord& r) {
  if (r.has_text(Language::kEn)) return *r.unofficial_text_en;
  if (r.has_text(Language::kFr)) return *r.unofficial_text_fr;
  return {};
}

// Sentences within lines, split after tokens ending in . ! ? unless guarded.
std::vector<std::string> sentences(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    std::istringstream words(line);
    std::string cur;
    for (std::string w; words >> w;) {
      cur += (cur.empty() ? "" : " ") + w;
      std::string core = w;
      while (!core.empty() && std::string_view("\"')]»”’").find(core.back()) != std::string_view::npos) core.pop_back();
      if (core.empty()) continue;
      char last = core.back();
      if ((last == '.' || last == '!' || last == '?') && !is_guarded_abbreviation(core)) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  }
  return out;
}

std::size_t word_count(const std::string& s) {
  std::istringstream in(s);
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

std::string cap_words(const std::string& s, std::size_t n) {
  std::istringstream in(s);
  std::string out;
  std::size_t k = 0;
  for (std::string w; in >> w; ++k) {
    if (k == n) return out + " ...";
    out += (out.empty() ? "" : " ") + w;
  }
  return out;
}

std::string pick(const std::vector<std::string>& sents, const std::vector<const char*>& keys, std::size_t max_sents) {
  std::string out;
  std::size_t taken = 0;
  for (auto& s : sents) {
    if (taken == max_sents) break;
    if (word_count(s) < 4) continue;
    std::string f = text::fold(s);
    bool hit = keys.empty();
    for (auto* k : keys) hit = hit || contains(f, k);
    if (!hit) continue;
    out += (out.empty() ? "" : " ") + s;
    ++taken;
  }
  return out.empty() ? out : cap_words(out, kNoteWords);
}

std::string with_commas(std::uint64_t n) {
  std::string s = std::to_string(n);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

std::string title_case(const std::string& upper) {
  std::string out = upper;
  bool start = true;
  for (auto& c : out) {
    unsigned char u = static_cast<unsigned char>(c);
    c = static_cast<char>(start ? std::toupper(u) : std::tolower(u));
    start = !std::isalpha(u);
  }
  return out;
}

const char* kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                         "July",    "August",   "September", "October", "November", "December"};

std::string long_date(Date d) {
  return std::string(kMonths[d.month() - 1]) + " " + std::to_string(d.day()) + ", " + std::to_string(d.year());
}

bool alnum_byte(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Replaces every bounded occurrence of each citation with `with`.
std::string scrub(std::string text, const std::vector<std::string>& citations, std::string_view with) {
  for (auto& c : citations) {
    if (c.empty()) continue;
    std::size_t pos = 0;
    while ((pos = text.find(c, pos)) != std::string::npos) {
      bool before = pos > 0 && alnum_byte(text[pos - 1]);
      bool after = pos + c.size() < text.size() && alnum_byte(text[pos + c.size()]);
      if (before || after) {
        ++pos;
        continue;
      }
      text.replace(pos, c.size(), with);
      pos += with.size();
    }
  }
  return text;
}

int outcome_rank(Outcome o) { return o == Outcome::kAllowed ? 0 : o == Outcome::kDismissed ? 1 : 2; }

}  // namespace

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kAllowed: return "allowed";
    case Outcome::kDismissed: return "dismissed";
    case Outcome::kOther: return "other";
  }
  return "other";
}

const std::vector<std::string>& KeywordClassifier::allowed_phrases() {
  static const std::vector<std::string> p = {
      "application for judicial review is granted",
      "application for judicial review is allowed",
      "judicial review is granted",
      "judicial review is allowed",
      "application is allowed",
      "application is granted",
      "appeal is allowed",
      "matter is remitted",
      "returned for redetermination",
      "sent back for redetermination",
      "la demande de controle judiciaire est accueillie",
      "la demande est accueillie",
      "l'appel est accueilli",
  };
  return p;
}

const std::vector<std::string>& KeywordClassifier::dismissed_phrases() {
  static const std::vector<std::string> p = {
      "application for judicial review is dismissed",
      "judicial review is dismissed",
      "application is dismissed",
      "appeal is dismissed",
      "la demande de controle judiciaire est rejetee",
      "la demande est rejetee",
      "l'appel est rejete",
  };
  return p;
}

Classification KeywordClassifier::classify(const DocumentRecord& r) const {
  std::string f = text::fold(body_text(r));
  Classification c;
  std::size_t last = std::string::npos;
  auto scan = [&](const std::vector<std::string>& phrases, Outcome o) {
    for (auto& p : phrases) {
      auto at = f.rfind(p);
      if (at != std::string::npos && (last == std::string::npos || at > last)) {
        last = at;
        c.outcome = o;
      }
    }
  };
  scan(allowed_phrases(), Outcome::kAllowed);
  scan(dismissed_phrases(), Outcome::kDismissed);
  c.category = "Other";
  for (auto& cat : categories()) {
    bool hit = false;
    for (auto* p : cat.phrases) hit = hit || contains(f, p);
    if (hit) {
      c.category = cat.label;
      break;
    }
  }
  return c;
}

void TemplateSummarizer::summarize(const DocumentRecord& r, CaseSummary& s) const {
  auto sents = sentences(body_text(r));
  s.facts = pick(sents, {"applicant", "claimant", "appellant", "demandeur", "demanderesse"}, 2);
  if (s.facts.empty()) s.facts = pick(sents, {}, 2);
  if (s.outcome == Outcome::kAllowed) {
    std::vector<const char*> keys;
    for (auto& [label, phrases] : error_grounds())
      for (auto* p : phrases) keys.push_back(p);
    for (auto* k : {"erred", "error", "failed to"}) keys.push_back(k);
    s.errors = pick(sents, keys, 2);
    if (s.errors.empty()) s.errors = "No error ground is stated in a single sentence.";
  } else if (s.outcome == Outcome::kDismissed) {
    s.errors = "No reviewable error found.";
  } else {
    s.errors = "Not applicable.";
  }
}

std::string TemplateSummarizer::key_themes(const std::vector<CaseSummary>& summaries) const {
  if (summaries.empty()) return "No decisions were released in this period.";
  std::size_t allowed = 0;
  std::vector<std::size_t> counts(error_grounds().size(), 0);
  for (auto& s : summaries) {
    if (s.outcome != Outcome::kAllowed) continue;
    ++allowed;
    std::string f = text::fold(s.errors);
    for (std::size_t g = 0; g < error_grounds().size(); ++g) {
      bool hit = false;
      for (auto* p : error_grounds()[g].second) hit = hit || contains(f, p);
      if (hit) ++counts[g];
    }
  }
  std::ostringstream out;
  if (allowed == 0) {
    out << "None of the " << summaries.size() << " decisions found a reviewable error.";
    return out.str();
  }
  out << allowed << " of " << summaries.size() << (summaries.size() == 1 ? " decision" : " decisions")
      << " found a reviewable error.";
  std::string grounds;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (!counts[g]) continue;
    grounds += (grounds.empty() ? "" : ", ") + std::string(error_grounds()[g].first) + " (" + std::to_string(counts[g]) +
               ")";
  }
  if (!grounds.empty()) out << " Grounds raised in those decisions: " << grounds << ".";
  return out.str();
}

DigestMemo weekly_digest(const CorpusSnapshot& snap, std::string_view dataset, IsoWeek week, Topic topic,
                         const Classifier& classifier, const Summarizer& summarizer) {
  Date monday = Date::monday_of(week);
  Date sunday = Date::from_days(monday.days_since_epoch() + 6);
  auto recs = select_cases(snap, dataset, topic, monday, sunday);
  std::vector<std::string_view> texts;
  for (auto* r : recs) texts.push_back(*r->unofficial_text_en);
  auto metrics = kernels::parallel::text_metrics_batch(texts);

  DigestMemo memo;
  memo.dataset = std::string(dataset);
  memo.period = week;
  memo.topic = topic;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const DocumentRecord& r = *recs[i];
    CaseSummary s;
    s.citation = primary_citation(r);
    s.name = primary_name(r);
    s.judge = extract_judge(r);
    auto c = classifier.classify(r);
    s.outcome = c.outcome;
    s.category = c.category;
    s.words = metrics[i].words;
    summarizer.summarize(r, s);
    memo.words += s.words;
    if (s.outcome == Outcome::kAllowed) ++memo.allowed;
    memo.summaries.push_back(std::move(s));
  }
  memo.decisions = memo.summaries.size();
  std::sort(memo.summaries.begin(), memo.summaries.end(), [](const CaseSummary& a, const CaseSummary& b) {
    if (a.outcome != b.outcome) return outcome_rank(a.outcome) < outcome_rank(b.outcome);
    if (a.category != b.category) return a.category < b.category;
    return a.citation < b.citation;
  });
  memo.key_themes = summarizer.key_themes(memo.summaries);
  return memo;
}

std::string render_memo(const DigestMemo& memo) {
  Date monday = Date::monday_of(memo.period);
  Date sunday = Date::from_days(monday.days_since_epoch() + 6);
  std::ostringstream out;
  out << "Memorandum: " << memo.dataset << (memo.topic == Topic::kImmigration ? " immigration/refugee" : "")
      << " decisions, week " << memo.period.str() << " (" << monday.iso() << " to " << sunday.iso() << ")\n\n";
  out << "Overview\n\n";
  out << "- Total decisions: " << memo.decisions << "\n";
  out << "- Allowed: " << memo.allowed << "\n";
  out << "- Total words released: " << with_commas(memo.words) << "\n\n";
  out << "Key themes: " << memo.key_themes << "\n\n";
  out << "Case summaries\n\n";
  if (memo.summaries.empty()) out << "No decisions were released in this period.\n";
  for (std::size_t i = 0; i < memo.summaries.size(); ++i) {
    const auto& s = memo.summaries[i];
    out << i + 1 << ") " << s.name << ", " << s.citation;
    if (s.judge) out << " (" << title_case(*s.judge) << " J.)";
    out << " - " << s.category << " - " << to_string(s.outcome) << "\n";
    out << "   - Facts: " << s.facts << "\n";
    out << "   - Errors: " << s.errors << "\n";
  }
  return out.str();
}

std::string digest_to_script(const DigestMemo& memo) {
  std::vector<std::string> cites;
  for (auto& s : memo.summaries) cites.push_back(s.citation);
  auto clean = [&](const std::string& t) { return scrub(t, cites, "this decision"); };

  Date monday = Date::monday_of(memo.period);
  Date sunday = Date::from_days(monday.days_since_epoch() + 6);
  std::ostringstream out;
  out << "INTRO\n";
  out << "Welcome to the weekly case digest. This episode covers " << memo.dataset << " decisions released from "
      << long_date(monday) << " to " << long_date(sunday) << " (week " << memo.period.str() << "). ";
  out << "The court released " << memo.decisions << (memo.decisions == 1 ? " decision" : " decisions")
      << " totalling " << with_commas(memo.words) << " words, and allowed " << memo.allowed << ".\n\n";
  if (memo.summaries.empty()) {
    out << "There were no decisions this week.\n\n";
  } else {
    out << clean(memo.key_themes) << "\n\n";
  }
  for (std::size_t i = 0; i < memo.summaries.size(); ++i) {
    const auto& s = memo.summaries[i];
    out << "SEGMENT " << i + 1 << "\n";
    out << "Case " << i + 1 << ": " << clean(s.name) << ", " << s.citation << ".";
    if (s.judge) out << " Decided by Justice " << title_case(*s.judge) << ".";
    out << " Category: " << clean(s.category) << ". Outcome: " << to_string(s.outcome) << ".\n";
    out << "What happened: " << clean(s.facts) << "\n";
    out << "The error: " << clean(s.errors) << "\n\n";
  }
  out << "OUTRO\n";
  out << "That is the digest for week " << memo.period.str() << ". Thanks for listening.\n";
  return out.str();
}

std::size_t count_citation(std::string_view text, std::string_view citation) {
  if (citation.empty()) return 0;
  std::size_t n = 0;
  for (std::size_t pos = text.find(citation); pos != std::string_view::npos; pos = text.find(citation, pos + 1)) {
    bool before = pos > 0 && alnum_byte(text[pos - 1]);
    bool after = pos + citation.size() < text.size() && alnum_byte(text[pos + citation.size()]);
    if (!before && !after) ++n;
  }
  return n;
}

}  // namespace openlex::analytics
