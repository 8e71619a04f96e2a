// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "openlex/analytics/digest.hpp"
#include "openlex/analytics/stats.hpp"
#include "openlex/analytics/text_metrics.hpp"
#include "openlex/api/api.hpp"
#include "openlex/ingest/ingest.hpp"
#include "openlex/mcp/mcp.hpp"
#include "openlex/search/search.hpp"
#include "openlex/store/coverage.hpp"
#include "openlex/store/parquet_io.hpp"
#include "openlex/text/utf8.hpp"
#include "test_support.hpp"

using namespace openlex;
using namespace openlex::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few mismatches so a failing line says what went wrong.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.size() < 3) first_.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o;
    o.pass = failures_ == 0;
    std::ostringstream ss;
    ss << summary << ", " << checks_ << " checks";
    if (failures_) {
      ss << ", " << failures_ << " failed:";
      for (auto& f : first_) ss << " [" << f << "]";
    }
    o.detail = ss.str();
    return o;
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::vector<std::string> first_;
};

// ---- 1 ---------------------------------------------------------------------

std::vector<std::string> published_fields(DocumentKind kind) {
  std::vector<std::string> out{"dataset"};
  for (auto f : {"citation", "citation2", "name", "document_date", "url", "scraped_timestamp", "unofficial_text"}) {
    out.push_back(std::string(f) + "_en");
    out.push_back(std::string(f) + "_fr");
  }
  if (kind == DocumentKind::kLaw) {
    out.push_back("unofficial_sections_en");
    out.push_back("unofficial_sections_fr");
  }
  out.push_back("upstream_license");
  return out;
}

std::vector<std::string> diff_names(const std::vector<std::string>& want, const std::vector<std::string>& got) {
  std::vector<std::string> d;
  for (auto& w : want)
    if (std::find(got.begin(), got.end(), w) == got.end()) d.push_back("-" + w);
  for (auto& g : got)
    if (std::find(want.begin(), want.end(), g) == want.end()) d.push_back("+" + g);
  if (d.empty() && want != got) d.push_back("order differs");
  return d;
}

Outcome schema_conformance() {
  Tally t;
  auto docs = fixture_corpus();
  docs.push_back(make_law("LEGISLATION-FED", "S.C. 2025, c. 7",
                          {{"1", "Short title", "This Act may be cited as the Widget Dealers Act."}}));
  TempDir dir;
  export_parquet(*CorpusSnapshot::make(docs, 1), dir.path());
  for (auto [kind, file] : {std::pair{DocumentKind::kCase, "cases/cases-00000.parquet"},
                            std::pair{DocumentKind::kLaw, "laws/laws-00000.parquet"}}) {
    auto table = parquet::read_file(dir.path() / file);
    std::vector<std::string> names;
    for (auto& f : table.fields) names.push_back(f.name);
    auto d = diff_names(published_fields(kind), names);
    std::string joined;
    for (auto& x : d) joined += x + " ";
    t.check(d.empty(), std::string(file) + ": " + joined);
  }
  return t.outcome("cases 16 and laws 18 columns compared");
}

// ---- 2 ---------------------------------------------------------------------

Outcome round_trip() {
  Tally t;
  std::mt19937 rng(20250801);
  std::size_t total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto snap = CorpusSnapshot::make(random_corpus(rng, static_cast<int>(rng() % 201)), 1 + trial);
    total += snap->size();
    TempDir dir;
    export_parquet(*snap, dir.path());
    auto loaded = load_parquet(dir.path());
    t.check(loaded.rejected.empty(), "trial " + std::to_string(trial) + " rejected rows");
    t.check(*loaded.snapshot == *snap, "trial " + std::to_string(trial) + " differs");
  }
  return t.outcome("100 corpora, " + std::to_string(total) + " records");
}

// ---- 3 ---------------------------------------------------------------------

Outcome search_oracle() {
  Tally t;
  std::mt19937 rng(4242);
  auto docs = random_search_corpus(rng, 1000);
  auto idx = Index::build(CorpusSnapshot::make(docs, 1));
  std::size_t nonempty = 0;
  for (int i = 0; i < 500; ++i) {
    auto q = random_query(rng, docs);
    const std::string tag = "query " + std::to_string(i);
    auto expected = oracle_ranked(idx->snapshot(), q);
    if (!expected.empty()) ++nonempty;

    std::set<RecordKey> want(expected.begin(), expected.end()), got;
    std::vector<RecordKey> unpaged;
    for (auto m : idx->ranked_matches(q)) {
      unpaged.push_back(record_key(*idx->snapshot().records()[m]));
      got.insert(unpaged.back());
    }
    t.check(got == want, tag + " set");
    t.check(unpaged == expected, tag + " order");

    std::vector<RecordKey> concat;
    QuerySpec p = q;
    for (p.page = 1;; ++p.page) {
      auto page = idx->search(p);
      t.check(page.total == expected.size(), tag + " total");
      if (page.hits.empty()) break;
      for (auto& h : page.hits) concat.push_back(h.key);
    }
    t.check(concat == unpaged, tag + " pages");
  }
  return t.outcome("500 queries, " + std::to_string(nonempty) + " with hits");
}

// ---- 4 ---------------------------------------------------------------------

std::string encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::pair<std::string, mcp::json> request_forms(const QuerySpec& q) {
  std::string qs;
  mcp::json args = mcp::json::object();
  auto add = [&](const std::string& k, const std::string& v) {
    qs += (qs.empty() ? "" : "&") + k + "=" + encode(v);
  };
  if (q.citation) add("citation", *q.citation), args["citation"] = *q.citation;
  if (q.name) add("name", *q.name), args["name"] = *q.name;
  if (q.text) add("text", *q.text), args["text"] = *q.text;
  if (q.date_from) add("date_from", q.date_from->iso()), args["date_from"] = q.date_from->iso();
  if (q.date_to) add("date_to", q.date_to->iso()), args["date_to"] = q.date_to->iso();
  for (auto& d : q.datasets) add("dataset", d);
  if (!q.datasets.empty()) args["dataset"] = q.datasets;
  add("page", std::to_string(q.page));
  add("page_size", std::to_string(q.page_size));
  args["page"] = q.page;
  args["page_size"] = q.page_size;
  return {qs, args};
}

Outcome service_equivalence() {
  Tally t;
  std::mt19937 rng(99);
  auto docs = random_search_corpus(rng, 400);
  auto idx = Index::build(CorpusSnapshot::make(docs, 3));
  api::Service service([idx] { return idx; }, make_tokenizer("word-fallback"));
  mcp::Server server([idx] { return idx; }, make_tokenizer("word-fallback"));
  for (int i = 0; i < 100; ++i) {
    auto q = random_query(rng, docs);
    q.kind = DocumentKind::kCase;
    q.page = 1 + static_cast<int>(rng() % 3);
    const std::string tag = "query " + std::to_string(i);
    const auto expected = api::to_json(idx->search(q));
    auto [qs, args] = request_forms(q);

    auto resp = service.handle("GET", "/v1/cases/search?" + qs);
    t.check(resp.status == 200, tag + " status " + std::to_string(resp.status));
    t.check(resp.body == expected.dump(), tag + " api body");

    auto tool = server.call_tool("search_cases", args);
    t.check(!tool.is_error, tag + " tool error");
    t.check(tool.structured == expected, tag + " tool content");
  }
  return t.outcome("100 queries through both services");
}

// ---- 5, 6 ------------------------------------------------------------------

class MapFetcher : public ingest::Fetcher {
 public:
  void add(const std::string& url, std::string body, std::string type = "text/html") {
    pages_[url] = {std::move(body), std::move(type), url};
  }
  ingest::FetchResult fetch(const std::string& url) override {
    std::lock_guard lock(mutex_);
    auto it = pages_.find(url);
    if (it == pages_.end()) throw ingest::FetchError(url + ": not found");
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, ingest::FetchResult> pages_;
};

std::string decision_page(const std::string& body) {
  return "<html><body><div class=\"decision\"><p>" + body + "</p></div></body></html>";
}

struct ChannelFixture {
  std::string name;
  SourceDescriptor source;
};

std::vector<ChannelFixture> channel_fixtures(MapFetcher& fetcher) {
  std::vector<ChannelFixture> out;

  auto fc = load_source_registry(fixtures() / "ingest" / "registry_fc.json").at(0);
  fetcher.add(fc.listing_url, read_text(fixtures() / "ingest" / "listing_fc.html"));
  for (auto id : {"521001", "521002", "520977"})
    fetcher.add(std::string("https://decisions.fct-cf.gc.ca/fc-cf/decisions/en/item/") + id + "/index.do",
                decision_page(std::string("Reasons for judgment in file ") + id + "."));
  out.push_back({"listing-scrape", fc});

  SourceDescriptor scc;
  scc.dataset = "SCC";
  scc.channel = Channel::kRss;
  scc.feed_url = "https://decisions.scc-csc.ca/scc-csc/scc-csc/en/rss.do";
  scc.license_text = "Reproduced under the Court's terms of use.";
  fetcher.add(scc.feed_url, read_text(fixtures() / "ingest" / "feed_ab.xml"), "application/rss+xml");
  for (auto id : {"21001", "21002"})
    fetcher.add(std::string("https://decisions.scc-csc.ca/scc-csc/scc-csc/en/item/") + id + "/index.do",
                decision_page(std::string("Judgment ") + id + "."));
  out.push_back({"rss", scc});

  SourceDescriptor laws;
  laws.dataset = "LEGISLATION-FED";
  laws.kind = DocumentKind::kLaw;
  laws.channel = Channel::kLawRepoSync;
  laws.repo_path = (fixtures() / "ingest" / "laws").string();
  laws.license_text = "Open Government Licence - Canada";
  out.push_back({"law-repo-sync", laws});

  SourceDescriptor drop;
  drop.dataset = "RPD";
  drop.channel = Channel::kFileDrop;
  drop.drop_path = (fixtures() / "ingest" / "drop").string();
  drop.license_text = "Provided by the Board under its publication policy.";
  out.push_back({"file-drop", drop});
  return out;
}

ingest::IngestOptions clock_at(const char* when) {
  ingest::IngestOptions o;
  auto t = ts(when);
  o.clock = [t] { return t; };
  return o;
}

Outcome ingestion_idempotence() {
  Tally t;
  MapFetcher fetcher;
  std::string summary;
  for (auto& ch : channel_fixtures(fetcher)) {
    TempDir dir;
    Store store(dir.path() / "store");
    auto first = ingest::run_source(ch.source, fetcher, store, dir.path() / "state", clock_at("2025-08-01T06:00:00Z"));
    auto bytes = read_text(dir.path() / "store" / "corpus.jsonl");
    auto second = ingest::run_source(ch.source, fetcher, store, dir.path() / "state", clock_at("2025-08-08T06:00:00Z"));
    t.check(first.new_records > 0 && first.failed == 0, ch.name + " first run stored nothing");
    t.check(read_text(dir.path() / "store" / "corpus.jsonl") == bytes, ch.name + " store changed");
    t.check(second.fetched > 0 && second.duplicate == second.fetched,
            ch.name + " second run " + std::to_string(second.duplicate) + "/" + std::to_string(second.fetched));
    summary += (summary.empty() ? "" : ", ") + ch.name + " " + std::to_string(second.duplicate) + "/" +
               std::to_string(second.fetched) + " duplicate";
  }
  return t.outcome(summary);
}

Outcome license_totality() {
  Tally t;
  MapFetcher fetcher;
  auto channels = channel_fixtures(fetcher);
  std::map<std::string, std::string> registry;
  for (auto& ch : channels) registry[ch.source.dataset] = ch.source.license_text;

  TempDir dir;
  Store store(dir.path() / "store");
  for (auto& ch : channels) ingest::run_source(ch.source, fetcher, store, dir.path() / "state", clock_at("2025-08-01T06:00:00Z"));

  // Random batches against the listing source, with some fetches failing.
  std::mt19937 rng(6);
  const auto& fc = channels[0].source;
  for (int round = 0; round < 20; ++round) {
    std::vector<ingest::DocumentStub> stubs;
    for (int i = 0; i < 10; ++i) {
      ingest::DocumentStub s;
      s.dataset = "FC";
      s.citation = "2025 FC " + std::to_string(2000 + rng() % 40);
      s.url = "https://decisions.fct-cf.gc.ca/random/" + std::to_string(rng() % 60);
      s.language = rng() % 3 ? Language::kEn : Language::kFr;
      if (rng() % 4) fetcher.add(s.url, decision_page("Body " + std::to_string(rng() % 5)));
      stubs.push_back(s);
    }
    ingest::ingest_batch(stubs, fetcher, fc, store, clock_at("2025-08-02T06:00:00Z"));
  }

  auto snap = load_store_snapshot(dir.path() / "store");
  for (auto& r : snap->records()) {
    const auto key = r->dataset + " " + primary_citation(*r);
    t.check(!r->upstream_license.empty(), key + " has no license");
    auto it = registry.find(r->dataset);
    t.check(it != registry.end() && it->second == r->upstream_license, key + " license differs from registry");
  }
  return t.outcome(std::to_string(snap->size()) + " stored records");
}

// ---- 7 ---------------------------------------------------------------------

double formula(double words, double sentences, double syllables) {
  return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
}

Outcome flesch() {
  Tally t;
  struct Hand {
    const char* text;
    int words, sentences, syllables;
  };
  // Counted by hand from the counting rules.
  const Hand hand[] = {
      {"The cat sat.", 3, 1, 3},
      {"The dog ran. It was fast.", 6, 2, 6},
      {"Justice is blind.", 3, 1, 4},
      {"Mr. Smith appealed the decision.", 5, 1, 9},
      {"Is it? Yes! Fine.", 4, 3, 4},
      {"The table is stable.", 4, 1, 6},
      {"Rhythm matters.", 2, 1, 3},
      {"The appeal is allowed. Costs to the respondent.", 8, 2, 13},
      {"See para. 12 of the reasons.", 6, 1, 8},
      {"La décision est confirmée.", 4, 1, 8},
  };
  for (auto& h : hand) {
    double got = flesch_reading_ease(h.text);
    double want = formula(h.words, h.sentences, h.syllables);
    t.check(std::fabs(got - want) <= 1e-6, std::string(h.text) + " scored " + std::to_string(got));
  }
  t.check(std::fabs(flesch_reading_ease("The cat sat.") - 119.19) <= 1e-6, "worked value 119.19");

  std::mt19937 rng(77);
  const char* vocab[] = {"the", "court", "dismissed", "application", "officer", "reasonable", "evidence", "Mr.",
                         "para.", "risk", "of", "return", "décision", "e.g.", "it", "is"};
  for (int i = 0; i < 50; ++i) {
    std::string s;
    int n = 1 + static_cast<int>(rng() % 60);
    for (int k = 0; k < n; ++k) {
      s += vocab[rng() % std::size(vocab)];
      s += rng() % 6 == 0 ? ". " : " ";
    }
    s += "end.";
    double once = flesch_reading_ease(s);
    double twice = flesch_reading_ease(s + " " + s);
    t.check(std::fabs(once - twice) <= 1e-9, "duplication changed score for text " + std::to_string(i));
  }
  return t.outcome("10 hand-counted texts, 50 duplicated texts");
}

// ---- 8 ---------------------------------------------------------------------

double sort_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

SnapshotPtr decisions_fixture() { return CorpusSnapshot::make(read_jsonl(fixtures() / "analytics" / "fc_decisions.jsonl"), 1); }

Outcome medians() {
  Tally t;
  t.check(analytics::median({100, 200}) == 150.0, "median {100,200}");
  t.check(analytics::median({200, 100, 400}) == 200.0, "median {200,100,400}");

  auto snap = decisions_fixture();
  ScanFilter only_fc;
  only_fc.dataset = "FC";
  auto fc = scan_refs(*snap, only_fc);

  // Per judge.
  std::map<std::string, std::vector<double>> by_judge;
  for (auto* r : fc)
    if (r->has_text(Language::kEn))
      if (auto j = analytics::extract_judge(*r)) by_judge[*j].push_back(double(text_metrics(*r->unofficial_text_en).words));
  auto table = analytics::median_wordcount_by_judge(*snap, "FC", analytics::Topic::kAll);
  t.check(table.rows.size() == by_judge.size(), "judge count");
  for (auto& row : table.rows) {
    auto it = by_judge.find(row.judge);
    t.check(it != by_judge.end() && row.median_words == sort_median(it->second) &&
                row.decisions == it->second.size(),
            "judge " + row.judge);
  }

  // Per year.
  std::map<int, std::vector<double>> by_year;
  for (auto* r : fc) {
    auto d = primary_date(*r);
    if (d && r->has_text(Language::kEn) && text_metrics(*r->unofficial_text_en).words > 0)
      by_year[d->year()].push_back(flesch_reading_ease(*r->unofficial_text_en));
  }
  auto trend = analytics::readability_trend(*snap, "FC", 2023, 2025);
  for (auto& y : trend) {
    auto it = by_year.find(y.year);
    if (it == by_year.end()) {
      t.check(!y.median && y.decisions == 0, "year " + std::to_string(y.year) + " should be empty");
    } else {
      t.check(y.median && *y.median == sort_median(it->second), "readability year " + std::to_string(y.year));
    }
  }

  // Weekly totals, zero-filled, grouped by ISO year.
  std::map<IsoWeek, double> words;
  for (auto* r : fc)
    if (auto d = primary_date(*r); d && r->has_text(Language::kEn))
      words[d->iso_week()] += double(text_metrics(*r->unofficial_text_en).words);
  std::map<int, std::vector<double>> weekly;
  for (auto day = Date::monday_of(words.begin()->first); day.iso_week() <= words.rbegin()->first;
       day = Date::from_days(day.days_since_epoch() + 7))
    weekly[int(day.iso_week().year)].push_back(words.count(day.iso_week()) ? words[day.iso_week()] : 0.0);
  auto vol = analytics::weekly_volume(*snap, "FC");
  t.check(vol.years.size() == weekly.size(), "weekly year count");
  for (auto& y : vol.years)
    t.check(weekly.count(y.year) && y.median_weekly_words == sort_median(weekly[y.year]) &&
                y.weeks == weekly[y.year].size(),
            "weekly median " + std::to_string(y.year));

  // Extremes view over more judges than it shows.
  const char* names[] = {"Ahmed", "Brown", "Chen", "Diallo", "Evans", "Fortin", "Gagnon", "Hughes", "Ito", "Jones", "Kaur", "Lee", "Moreau"};
  std::vector<DocumentRecord> docs;
  for (std::size_t j = 0; j < std::size(names); ++j) {
    for (int k = 0; k < 2; ++k) {
      std::string body = "PRESENT: The Honourable Justice " + std::string(names[j]) + "\n";
      const int extra = static_cast<int>(10 * j + 4 * k);
      for (int w = 0; w < extra; ++w) body += "word ";
      auto r = make_case("FC", "2025 FC " + std::to_string(100 + 2 * j + k), body, "2025-03-03");
      docs.push_back(std::move(r));
    }
  }
  auto wide = analytics::median_wordcount_by_judge(*CorpusSnapshot::make(docs, 1), "FC", analytics::Topic::kAll);
  auto view = analytics::lowest_and_highest(wide, 5);
  t.check(wide.rows.size() == std::size(names), "wide table rows");
  t.check(view.size() == 10, "extremes view has 10 rows");
  if (view.size() == 10 && wide.rows.size() == std::size(names)) {
    t.check(std::equal(view.begin(), view.begin() + 5, wide.rows.begin()), "lowest five");
    t.check(std::equal(view.begin() + 5, view.end(), wide.rows.end() - 5), "highest five");
    t.check(view.front().judge == "AHMED" && view.back().judge == "MOREAU", "extremes order");
  }
  auto tsv = analytics::judge_table_tsv(view);
  t.check(std::count(tsv.begin(), tsv.end(), '\n') == 11, "extremes view renders header plus 10 rows");
  t.check(tsv.find("GAGNON") == std::string::npos, "middle judge hidden");
  return t.outcome(std::to_string(table.rows.size()) + " judges, " + std::to_string(trend.size()) + " years, " +
                   std::to_string(vol.weeks.size()) + " weeks");
}

// ---- 9 ---------------------------------------------------------------------

std::uint64_t oracle_words(const std::string& text) {
  std::istringstream in(text::fold(text));
  std::uint64_t n = 0;
  for (std::string tok; in >> tok;)
    n += std::any_of(tok.begin(), tok.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); });
  return n;
}

Outcome digest_integrity() {
  Tally t;
  auto snap = decisions_fixture();
  auto week = *IsoWeek::parse("2025-W29");
  analytics::KeywordClassifier classifier;
  analytics::TemplateSummarizer summarizer;
  auto memo = analytics::weekly_digest(*snap, "FC", week, analytics::Topic::kImmigration, classifier, summarizer);

  std::uint64_t words = 0;
  std::set<std::string> in_week;
  for (auto& r : snap->records()) {
    auto d = primary_date(*r);
    if (r->dataset != "FC" || !d || !(d->iso_week() == week) || !r->has_text(Language::kEn)) continue;
    if (!analytics::matches_topic(*r, analytics::Topic::kImmigration)) continue;
    words += oracle_words(*r->unofficial_text_en);
    in_week.insert(primary_citation(*r));
  }
  // The fixture week is labeled: three immigration decisions, one allowed.
  t.check(memo.decisions == 3 && in_week.size() == 3, "decision count " + std::to_string(memo.decisions));
  t.check(memo.allowed == 1, "allowed count " + std::to_string(memo.allowed));
  t.check(memo.allowed <= memo.decisions, "allowed exceeds decisions");
  t.check(memo.words == words, "words " + std::to_string(memo.words) + " vs " + std::to_string(words));
  t.check(memo.summaries.size() == memo.decisions, "one summary per decision");
  std::set<std::string> summarized;
  for (auto& s : memo.summaries) summarized.insert(s.citation);
  t.check(summarized == in_week, "summaries cover the week");

  auto script = analytics::digest_to_script(memo);
  for (auto& c : in_week) t.check(analytics::count_citation(script, c) == 1, c + " not exactly once in script");
  auto again = analytics::weekly_digest(*snap, "FC", week, analytics::Topic::kImmigration, classifier, summarizer);
  t.check(analytics::render_memo(memo) == analytics::render_memo(again), "memo re-render differs");
  t.check(script == analytics::digest_to_script(again), "script re-render differs");
  return t.outcome("2025-W29 imm: " + std::to_string(memo.decisions) + " decisions, " + std::to_string(memo.allowed) +
                   " allowed, " + std::to_string(memo.words) + " words");
}

// ---- 10 --------------------------------------------------------------------

Outcome coverage() {
  Tally t;
  auto docs = fixture_corpus();
  auto snap = CorpusSnapshot::make(docs, 1);
  auto table = coverage_stats(*snap, WordTokenizer());

  std::map<std::string, std::uint64_t> tokens;
  for (auto& r : docs)
    for (Language l : kLanguages)
      if (r.text(l)) {
        std::istringstream in(*r.text(l));
        for (std::string w; in >> w;) ++tokens[r.dataset];
      }
  struct Hand {
    const char* dataset;
    const char* earliest;
    const char* latest;
    std::uint64_t documents;
  };
  const Hand hand[] = {{"FC", "2024-02-05", "2024-03-11", 2},
                       {"IRB", "2024-04-02", "2024-04-02", 1},
                       {"SCC", "2024-03-11", "2024-03-11", 1},
                       {"TCC", "2023-11-20", "2023-11-20", 1}};
  t.check(table.rows.size() == std::size(hand), "row count " + std::to_string(table.rows.size()));
  for (std::size_t i = 0; i < std::min(table.rows.size(), std::size(hand)); ++i) {
    auto& row = table.rows[i];
    CoverageRow want{hand[i].dataset, date(hand[i].earliest), date(hand[i].latest), hand[i].documents,
                     tokens[hand[i].dataset]};
    t.check(row == want, std::string("row ") + hand[i].dataset);
  }
  std::uint64_t docs_sum = 0, tok_sum = 0;
  for (auto& r : table.rows) docs_sum += r.documents, tok_sum += r.tokens;
  t.check(table.total_documents == docs_sum && table.total_tokens == tok_sum, "totals row");

  auto empty = coverage_stats(CorpusSnapshot(), WordTokenizer());
  t.check(empty.rows.empty() && empty.total_documents == 0 && empty.total_tokens == 0, "empty corpus");
  return t.outcome(std::to_string(table.rows.size()) + " datasets, " + std::to_string(table.total_tokens) + " tokens");
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "schema conformance", 5, schema_conformance},
      {2, "parquet round-trip", 60, round_trip},
      {3, "search oracle", 120, search_oracle},
      {4, "api/mcp equivalence", 0, service_equivalence},
      {5, "ingestion idempotence", 0, ingestion_idempotence},
      {6, "license totality", 0, license_totality},
      {7, "flesch correctness", 0, flesch},
      {8, "medians", 0, medians},
      {9, "digest integrity", 0, digest_integrity},
      {10, "coverage stats", 0, coverage},
  };
  int failed = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream timing;
    timing.precision(2);
    timing << std::fixed << secs << " s";
    if (c.budget_s > 0) {
      timing << " of " << c.budget_s << " s";
      if (secs >= c.budget_s) {
        o.pass = false;
        o.detail += ", over time budget";
      }
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << " (" << o.detail << "; "
              << timing.str() << ")" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " of 10 criteria failed" : std::string("all 10 criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
