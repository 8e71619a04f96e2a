#include "openlex/analytics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <sstream>

#include "openlex/error.hpp"
#include "openlex/kernels/kernels.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::analytics {

namespace {

constexpr std::size_t kHeaderCodepoints = 2000;

std::vector<std::string_view> english_texts(const std::vector<const DocumentRecord*>& recs) {
  std::vector<std::string_view> out;
  out.reserve(recs.size());
  for (auto* r : recs) out.push_back(*r->unofficial_text_en);
  return out;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw UndefinedInput("median of an empty set");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::optional<Topic> parse_topic(std::string_view s) {
  if (s == "all") return Topic::kAll;
  if (s == "imm" || s == "immigration") return Topic::kImmigration;
  return std::nullopt;
}

std::string_view to_string(Topic t) { return t == Topic::kAll ? "all" : "imm"; }

bool matches_topic(const DocumentRecord& r, Topic t) {
  if (t == Topic::kAll) return true;
  for (Language l : kLanguages)
    if (r.citation2(l) && r.citation2(l)->rfind("IMM-", 0) == 0) return true;
  if (!r.unofficial_text_en) return false;
  static const std::regex docket(R"(\bIMM-\d{1,6}-\d{2}\b)");
  std::string_view t_en = *r.unofficial_text_en;
  std::string_view head = t_en.substr(0, text::prefix_bytes(t_en, kHeaderCodepoints));
  return std::regex_search(head.begin(), head.end(), docket);
}

std::vector<const DocumentRecord*> select_cases(const CorpusSnapshot& snap, std::string_view dataset, Topic topic,
                                                std::optional<Date> from, std::optional<Date> to) {
  ScanFilter f;
  f.dataset = std::string(dataset);
  f.kind = DocumentKind::kCase;
  f.from = from;
  f.to = to;
  std::vector<const DocumentRecord*> out;
  for (auto* r : scan_refs(snap, f))
    if (r->has_text(Language::kEn) && matches_topic(*r, topic)) out.push_back(r);
  return out;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<YearReadability> readability_trend(const CorpusSnapshot& snap, std::string_view dataset, int first_year,
                                               int last_year, Topic topic) {
  if (!snap.has_dataset(dataset)) throw InvalidQuery("unknown dataset: " + std::string(dataset));
  if (first_year > last_year) throw InvalidQuery("first year is after last year");
  auto recs = select_cases(snap, dataset, topic, Date(first_year, 1, 1), Date(last_year, 12, 31));
  auto texts = english_texts(recs);
  auto metrics = kernels::parallel::text_metrics_batch(texts);

  std::map<int, std::vector<double>> by_year;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (metrics[i].words == 0) continue;
    by_year[primary_date(*recs[i])->year()].push_back(flesch_from_metrics(metrics[i]));
  }
  std::vector<YearReadability> out;
  for (int y = first_year; y <= last_year; ++y) {
    YearReadability row;
    row.year = y;
    if (auto it = by_year.find(y); it != by_year.end()) {
      row.decisions = it->second.size();
      row.median = median(it->second);
    }
    out.push_back(row);
  }
  return out;
}

std::string readability_tsv(const std::vector<YearReadability>& rows) {
  std::ostringstream out;
  out << "year\tmedian\tn\n";
  for (auto& r : rows) out << r.year << '\t' << (r.median ? format_number(*r.median) : "NA") << '\t' << r.decisions << '\n';
  return out.str();
}

JudgeTable median_wordcount_by_judge(const CorpusSnapshot& snap, std::string_view dataset, Topic topic,
                                     std::optional<Date> from, std::optional<Date> to,
                                     const JudgePatterns& patterns) {
  auto recs = select_cases(snap, dataset, topic, from, to);
  auto texts = english_texts(recs);
  auto metrics = kernels::parallel::text_metrics_batch(texts);

  JudgeTable table;
  table.decisions = recs.size();
  std::map<std::string, std::vector<double>> by_judge;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    auto judge = extract_judge(*recs[i], patterns);
    if (!judge) {
      ++table.unknown;
      continue;
    }
    by_judge[*judge].push_back(static_cast<double>(metrics[i].words));
  }
  for (auto& [judge, counts] : by_judge) table.rows.push_back({judge, median(counts), counts.size()});
  std::sort(table.rows.begin(), table.rows.end(), [](const JudgeRow& a, const JudgeRow& b) {
    return a.median_words != b.median_words ? a.median_words < b.median_words : a.judge < b.judge;
  });
  return table;
}

std::vector<JudgeRow> lowest_and_highest(const JudgeTable& table, std::size_t n) {
  if (table.rows.size() <= 2 * n) return table.rows;
  std::vector<JudgeRow> out(table.rows.begin(), table.rows.begin() + n);
  out.insert(out.end(), table.rows.end() - n, table.rows.end());
  return out;
}

std::string judge_table_tsv(const std::vector<JudgeRow>& rows) {
  std::ostringstream out;
  out << "judge\tmedian_words\tdecisions\n";
  for (auto& r : rows) out << r.judge << '\t' << format_number(r.median_words) << '\t' << r.decisions << '\n';
  return out.str();
}

WeeklyVolume weekly_volume(const CorpusSnapshot& snap, std::string_view dataset, Topic topic) {
  auto all = select_cases(snap, dataset, topic);
  std::vector<const DocumentRecord*> recs;
  for (auto* r : all)
    if (primary_date(*r)) recs.push_back(r);
  auto texts = english_texts(recs);
  auto metrics = kernels::parallel::text_metrics_batch(texts);

  std::map<IsoWeek, WeekVolume> by_week;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    IsoWeek w = primary_date(*recs[i])->iso_week();
    auto& v = by_week[w];
    v.week = w;
    v.words += metrics[i].words;
    ++v.decisions;
  }
  WeeklyVolume out;
  if (by_week.empty()) return out;
  Date monday = Date::monday_of(by_week.begin()->first);
  const IsoWeek last = by_week.rbegin()->first;
  for (;; monday = Date::from_days(monday.days_since_epoch() + 7)) {
    IsoWeek w = monday.iso_week();
    if (w > last) break;
    auto it = by_week.find(w);
    out.weeks.push_back(it != by_week.end() ? it->second : WeekVolume{w, 0, 0});
  }
  std::map<int, std::vector<double>> by_year;
  for (auto& w : out.weeks) by_year[w.week.year].push_back(static_cast<double>(w.words));
  for (auto& [year, words] : by_year) out.years.push_back({year, median(words), words.size()});
  return out;
}

std::string weekly_volume_tsv(const WeeklyVolume& v) {
  std::ostringstream out;
  out << "week\twords\tn\n";
  for (auto& w : v.weeks) out << w.week.str() << '\t' << w.words << '\t' << w.decisions << '\n';
  return out.str();
}

std::string yearly_volume_tsv(const WeeklyVolume& v) {
  std::ostringstream out;
  out << "year\tmedian_weekly_words\tweeks\n";
  for (auto& y : v.years) out << y.year << '\t' << format_number(y.median_weekly_words) << '\t' << y.weeks << '\n';
  return out.str();
}

}  // namespace openlex::analytics
