#include "doctest.h"

#include <random>

#include "openlex/error.hpp"
#include "openlex/model/date.hpp"
#include "openlex/model/record_json.hpp"
#include "openlex/model/source.hpp"
#include "openlex/model/validate.hpp"
#include "openlex/text/utf8.hpp"
#include "test_support.hpp"

using namespace openlex;
using namespace openlex::testing;

TEST_CASE("iso dates round trip and compute ISO weeks") {
  auto d = date("2025-08-01");
  CHECK(d.iso() == "2025-08-01");
  CHECK(d.weekday() == 5);
  CHECK(d.iso_week().str() == "2025-W31");
  // 2021-01-03 is a Sunday that belongs to the last week of 2020.
  CHECK(date("2021-01-03").iso_week().str() == "2020-W53");
  CHECK(date("2024-12-30").iso_week().str() == "2025-W01");
  CHECK(Date::monday_of(*IsoWeek::parse("2025-W01")).iso() == "2024-12-30");
  CHECK(Date::weeks_in_iso_year(2020) == 53);
  CHECK(Date::weeks_in_iso_year(2021) == 52);
  CHECK_FALSE(Date::from_iso("2025-02-30"));
  CHECK_FALSE(Date::from_iso("2025-8-1"));
}

TEST_CASE("iso week numbering agrees with a brute-force walk") {
  // Walk day by day from a known Monday, counting weeks by hand.
  Date d = date("2018-01-01");  // Monday of 2018-W01
  int year = 2018, week = 1;
  for (int i = 0; i < 365 * 8; ++i) {
    Date cur = Date::from_days(d.days_since_epoch() + i);
    if (i > 0 && cur.weekday() == 1) {
      ++week;
      // ISO year changes on the Monday of the week containing Jan 4.
      Date thursday = Date::from_days(cur.days_since_epoch() + 3);
      if (thursday.year() != year) {
        year = thursday.year();
        week = 1;
      }
    }
    REQUIRE(cur.iso_week().year == year);
    REQUIRE(cur.iso_week().week == static_cast<unsigned>(week));
  }
}

TEST_CASE("date parsing honours declared formats and refuses ambiguity") {
  CHECK(parse_date("2025-07-16", "iso")->iso() == "2025-07-16");
  CHECK(parse_date("16/07/2025", "dmy")->iso() == "2025-07-16");
  CHECK(parse_date("07/16/2025", "mdy")->iso() == "2025-07-16");
  CHECK(parse_date("July 16, 2025", "long-en")->iso() == "2025-07-16");
  CHECK(parse_date("16 juillet 2025", "long-fr")->iso() == "2025-07-16");
  CHECK(parse_date("1er août 2025", "long-fr")->iso() == "2025-08-01");
  CHECK(parse_date("Wed, 16 Jul 2025 10:00:00 GMT", "rfc822")->iso() == "2025-07-16");
  CHECK(parse_date("2025-07-16", "auto")->iso() == "2025-07-16");
  CHECK_FALSE(parse_date("03/04/2025", "auto"));
  CHECK(parse_date("16/07/2025", "auto")->iso() == "2025-07-16");
  CHECK(parse_date("05/05/2025", "auto")->iso() == "2025-05-05");
  CHECK_FALSE(parse_date("not a date", "auto"));
}

TEST_CASE("timestamps format in UTC") {
  auto t = ts("2025-08-01T12:34:56Z");
  CHECK(format_timestamp(t) == "2025-08-01T12:34:56Z");
  CHECK(format_timestamp(*parse_timestamp("2025-08-01 12:34:56.250Z")) == "2025-08-01T12:34:56Z");
  CHECK_FALSE(parse_timestamp("2025-08-01T12:34:56+02:00"));
}

TEST_CASE("folding lowercases and removes Latin diacritics") {
  CHECK(text::fold("Décision ÉCRITE") == "decision ecrite");
  CHECK(text::fold("Œuvre") == "oeuvre");
  CHECK(text::fold("l’appel") == "l'appel");
  CHECK(text::codepoint_count("été") == 3);
  CHECK(text::prefix_bytes("été", 2) == 3);
  CHECK(text::collapse_whitespace("  2024   FC\t12 ") == "2024 FC 12");
}

TEST_CASE("search terms are folded alphanumeric runs with source offsets") {
  std::vector<std::string> terms;
  std::vector<std::size_t> offsets;
  text::for_each_term("Réfugié, 2024 FC-12!", [&](std::string_view t, std::size_t off, std::size_t) {
    terms.emplace_back(t);
    offsets.push_back(off);
  });
  CHECK(terms == std::vector<std::string>{"refugie", "2024", "fc", "12"});
  CHECK(offsets == std::vector<std::size_t>{0, 11, 16, 19});
}

TEST_CASE("validate_record") {
  SUBCASE("minimal English record is valid") {
    CHECK(validate_record(make_case("FC", "2024 FC 1", "Text.")).ok());
  }
  SUBCASE("no text in either language") {
    auto r = make_case("FC", "2024 FC 1", "");
    auto v = validate_record(r);
    REQUIRE(v.has("no_text"));
    CHECK(v.summary().find("no text in either language") != std::string::npos);
  }
  SUBCASE("sections on a case record") {
    auto r = make_case("FC", "2024 FC 1", "Text.");
    r.unofficial_sections_en = std::vector<LawSection>{{"1", std::nullopt, "x"}};
    auto v = validate_record(r);
    REQUIRE(v.has("sections_on_case"));
    CHECK(v.summary().find("sections on a case record") != std::string::npos);
  }
  SUBCASE("every violated invariant is named") {
    DocumentRecord r;
    r.dataset = "bad code";
    r.unofficial_text_fr = "Texte.";
    r.document_date_en = date("2024-01-01");
    r.document_date_fr = date("2024-01-02");
    auto v = validate_record(r);
    for (auto code : {"bad_dataset", "no_citation", "no_license", "missing_url_fr", "missing_timestamp_fr",
                      "date_mismatch"})
      CHECK_MESSAGE(v.has(code), code);
    CHECK_FALSE(v.has("no_text"));
  }
  SUBCASE("French-only records are valid") {
    DocumentRecord r;
    r.dataset = "TATQ";
    r.citation_fr = "2024 QCTAT 5";
    r.unofficial_text_fr = "Décision.";
    r.url_fr = "https://example.test/fr";
    r.scraped_timestamp_fr = ts("2025-01-01T00:00:00Z");
    r.upstream_license = "Licence";
    CHECK(validate_record(r).ok());
  }
}

TEST_CASE("validate_record is deterministic over randomized records") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto r = make_case("FC", "2024 FC " + std::to_string(i), (rng() % 2) ? "Text." : "");
    if (rng() % 3 == 0) r.url_en.reset();
    if (rng() % 4 == 0) r.upstream_license.clear();
    auto a = validate_record(r);
    auto b = validate_record(DocumentRecord(r));
    CHECK(a.violations == b.violations);
  }
}

TEST_CASE("validate_corpus flags keys shared across languages") {
  auto a = make_case("FC", "2024 FC 1", "A.");
  auto b = make_case("FC", "2024 FC 2", "B.");
  b.citation_fr = "2024  FC 1";
  std::vector<DocumentRecord> v{a, b};
  CHECK(validate_corpus(v).has("duplicate_key"));
  b.dataset = "SCC";
  std::vector<DocumentRecord> w{a, b};
  CHECK_FALSE(validate_corpus(w).has("duplicate_key"));
}

TEST_CASE("record JSON uses the published field names") {
  auto r = make_law("LEGISLATION-FED", "R.S.C. 1985, c. A-1", {{"1", "Short title", "This Act may be cited."}});
  auto j = record_to_json(r);
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys.front() == "dataset");
  CHECK(keys.back() == "upstream_license");
  CHECK(j.contains("unofficial_sections_en"));
  CHECK(record_from_json(nlohmann::json::parse(j.dump())) == r);

  auto c = make_case("FC", "2024 FC 1", "Text.");
  auto cj = record_to_json(c);
  CHECK_FALSE(cj.contains("unofficial_sections_en"));
  CHECK(cj.size() == 16);
  CHECK(record_from_json(nlohmann::json::parse(record_to_stored_json(c).dump())) == c);
}

TEST_CASE("source registry parsing") {
  auto reg = parse_source_registry(R"([
    {"dataset": "FC", "kind": "case", "channel": "rss", "feed_url": "https://fc.example/rss",
     "license_text": "Terms apply", "language": "en"},
    {"dataset": "LEGISLATION-FED", "kind": "law", "channel": "law-repo-sync", "repo_path": "laws/",
     "license_text": "OGL", "schedule": "weekly", "politeness_delay": 0}
  ])");
  REQUIRE(reg.size() == 2);
  CHECK(reg[0].channel == Channel::kRss);
  CHECK(reg[0].politeness_delay == doctest::Approx(1.0));
  CHECK(reg[1].kind == DocumentKind::kLaw);

  CHECK_THROWS_AS(parse_source_registry(R"([{"dataset":"FC","kind":"case","channel":"rss",
      "feed_url":"x","license_text":""}])"), ConfigError);
  CHECK_THROWS_AS(parse_source_registry(R"([{"dataset":"FC","kind":"case","channel":"rss",
      "feed_url":"x","license_text":"t","politeness_delay":-1}])"), ConfigError);
  CHECK_THROWS_AS(parse_source_registry(R"([{"dataset":"FC","kind":"case","channel":"carrier-pigeon",
      "license_text":"t"}])"), ConfigError);
}
