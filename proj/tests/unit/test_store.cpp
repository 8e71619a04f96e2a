#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <thread>

#include "openlex/error.hpp"
#include "openlex/model/record_json.hpp"
#include "openlex/store/coverage.hpp"
#include "openlex/store/parquet_io.hpp"
#include "openlex/store/store.hpp"
#include "generators.hpp"
#include "test_support.hpp"

using namespace openlex;
using namespace openlex::testing;

namespace {

std::vector<DocumentRecord> five_records() {
  return {
      make_case("SCC", "2023 SCC 1", "Supreme text one.", "2023-02-01"),
      make_case("FC", "2024 FC 10", "Federal text.", "2024-05-05"),
      make_case("SCC", "2021 SCC 7", "Supreme text two.", "2021-07-07"),
      make_case("FCA", "2022 FCA 3", "Appeal text.", "2022-03-03"),
      make_law("LEGISLATION-FED", "S.C. 2001, c. 27", {{"1", "Short title", "This Act may be cited."}}),
  };
}

std::vector<std::string> keys_of(const std::vector<DocumentRecord>& v) {
  std::vector<std::string> k;
  for (auto& r : v) k.push_back(record_key(r).str());
  return k;
}

}  // namespace

TEST_CASE("upsert counts inserts, unchanged and updates") {
  Store store;
  std::vector<DocumentRecord> two = {make_case("FC", "2024 FC 1", "One."), make_case("FC", "2024 FC 2", "Two.")};
  auto a = store.upsert(two);
  CHECK(a.inserted == 2);
  CHECK(a.version == 1);
  auto b = store.upsert(two);
  CHECK(b.unchanged == 2);
  CHECK(b.inserted + b.updated == 0);
  CHECK(b.version == 1);

  auto edited = two[0];
  edited.unofficial_text_en = "One, amended.";
  std::vector<DocumentRecord> one = {edited};
  auto c = store.upsert(one);
  CHECK(c.updated == 1);
  CHECK(c.version == 2);
  auto log = store.write_log();
  REQUIRE(log.size() == 1);
  CHECK(log[0].previous == two[0]);
  CHECK(log[0].key == "FC/2024 FC 1");
  CHECK(*store.snapshot()->find("FC", "2024 FC 1")->unofficial_text_en == "One, amended.");
}

TEST_CASE("upsert rejects the whole batch on a validation failure") {
  Store store;
  std::vector<DocumentRecord> batch = {make_case("FC", "2024 FC 1", "One."), make_case("FC", "2024 FC 2", "")};
  auto rep = store.upsert(batch);
  CHECK_FALSE(rep.accepted());
  REQUIRE(rep.rejected.size() == 1);
  CHECK(rep.rejected[0].index == 1);
  CHECK(rep.rejected[0].violations[0].code == "no_text");
  CHECK(store.snapshot()->empty());
  CHECK(store.snapshot()->version() == 0);
}

TEST_CASE("a French stub merges with the English record holding its citation") {
  Store store;
  std::vector<DocumentRecord> en = {make_case("FC", "2024 FC 1", "English.")};
  store.upsert(en);
  auto both = en[0];
  both.citation_fr = "2024 CF 1";
  both.unofficial_text_fr = "Français.";
  both.url_fr = "https://example.test/fr";
  both.scraped_timestamp_fr = ts("2025-08-02T00:00:00Z");
  std::vector<DocumentRecord> b = {both};
  auto rep = store.upsert(b);
  CHECK(rep.updated == 1);
  CHECK(store.snapshot()->size() == 1);
  CHECK(store.snapshot()->find("FC", "2024 CF 1") == store.snapshot()->find("FC", "2024 FC 1"));
}

TEST_CASE("upsert idempotence over random batches") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto recs = random_corpus(rng, 30);
    Store s1, s2;
    s1.upsert(recs);
    s2.upsert(recs);
    auto again = s2.upsert(recs);
    CHECK(again.unchanged == recs.size());
    CHECK(*s1.snapshot() == *s2.snapshot());
  }
}

TEST_CASE("scan filters and orders records") {
  Store store;
  CHECK(scan(*store.snapshot()).empty());
  auto recs = five_records();
  store.upsert(recs);
  auto snap = store.snapshot();

  ScanFilter scc;
  scc.dataset = "SCC";
  auto got = scan(*snap, scc);
  // Linear oracle: filter then order by (dataset, date, citation).
  std::vector<DocumentRecord> expect;
  for (auto& r : recs)
    if (r.dataset == "SCC") expect.push_back(r);
  std::sort(expect.begin(), expect.end(), scan_order_less);
  CHECK(keys_of(got) == keys_of(expect));
  CHECK(got.size() == 2);
  CHECK(*got[0].citation_en == "2021 SCC 7");

  ScanFilter none;
  none.from = date("1990-01-01");
  none.to = date("1990-12-31");
  CHECK(scan(*snap, none).empty());

  ScanFilter laws;
  laws.kind = DocumentKind::kLaw;
  CHECK(scan(*snap, laws).size() == 1);
  CHECK(scan(*snap).size() == 5);
}

TEST_CASE("directory store persists and stays byte-identical on no-op batches") {
  TempDir dir;
  auto recs = five_records();
  {
    Store s(dir.path());
    s.upsert(recs);
  }
  std::string before = read_text(dir / "corpus.jsonl");
  {
    Store s(dir.path());
    CHECK(s.snapshot()->size() == 5);
    CHECK(s.snapshot()->version() == 1);
    auto rep = s.upsert(recs);
    CHECK(rep.unchanged == 5);
  }
  CHECK(read_text(dir / "corpus.jsonl") == before);
  CHECK_FALSE(std::filesystem::exists(dir / "wal.jsonl"));

  Store s(dir.path());
  auto edited = recs[1];
  edited.unofficial_text_en = "Changed.";
  std::vector<DocumentRecord> one = {edited};
  s.upsert(one);
  auto log = s.write_log();
  REQUIRE(log.size() == 1);
  CHECK(log[0].previous == recs[1]);
  CHECK(load_store_snapshot(dir.path())->version() == 2);
}

TEST_CASE("readers keep their snapshot while writers commit") {
  Store store;
  std::vector<DocumentRecord> first = {make_case("FC", "2024 FC 1", "One.")};
  store.upsert(first);
  auto reader = store.snapshot();
  std::thread writer([&] {
    for (int i = 2; i < 50; ++i) {
      std::vector<DocumentRecord> b = {make_case("FC", "2024 FC " + std::to_string(i), "More.")};
      store.upsert(b);
    }
  });
  for (int i = 0; i < 1000; ++i) {
    auto s = store.snapshot();
    REQUIRE(s->size() == s->version());
  }
  writer.join();
  CHECK(reader->size() == 1);
  CHECK(reader->version() == 1);
  CHECK(store.snapshot()->size() == 49);
}

TEST_CASE("parquet export writes both tables and a card") {
  TempDir dir;
  std::vector<DocumentRecord> recs = {
      make_case("FC", "2024 FC 1", "a b c", "2024-01-01"), make_case("FC", "2024 FC 2", "d e", "2024-02-01"),
      make_case("SCC", "2024 SCC 1", "f", "2024-03-01"),
      make_law("LEGISLATION-FED", "S.C. 2001, c. 27", {{"1", "Short title", "Cited."}})};
  auto snap = CorpusSnapshot::make(recs, 4);
  auto m = export_parquet(*snap, dir.path());
  REQUIRE(m.files.size() == 3);
  CHECK(m.files[0].path == "cases/cases-00000.parquet");
  CHECK(m.files[0].rows == 3);
  CHECK(m.files[1].rows == 1);
  std::string card = read_text(dir / "README.md");
  CHECK(card.rfind("---\n", 0) == 0);
  CHECK(card.find("snapshot_version: 4") != std::string::npos);
  CHECK(card.find("case_count: 3") != std::string::npos);
  CHECK(card.find("law_count: 1") != std::string::npos);
  CHECK(card.find("tokenizer: \"word-fallback\"") != std::string::npos);
  CHECK(card.find("| FC | 2024-01-01 | 2024-02-01 | 2 | 5 |") != std::string::npos);

  auto cases = parquet::read_file(dir / "cases/cases-00000.parquet");
  std::vector<std::string> names;
  for (auto& f : cases.fields) names.push_back(f.name);
  CHECK(names == case_columns());
  auto laws = parquet::read_file(dir / "laws/laws-00000.parquet");
  names.clear();
  for (auto& f : laws.fields) names.push_back(f.name);
  CHECK(names == law_columns());

  TempDir empty;
  auto m2 = export_parquet(CorpusSnapshot(), empty.path());
  CHECK(m2.files[0].rows == 0);
  CHECK(m2.files[1].rows == 0);
  CHECK(load_parquet(empty.path()).snapshot->empty());
}

TEST_CASE("export then load is the identity on random corpora") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 15; ++trial) {
    auto snap = CorpusSnapshot::make(random_corpus(rng, static_cast<int>(rng() % 40)), rng() % 100);
    TempDir dir;
    export_parquet(*snap, dir.path());
    auto back = load_parquet(dir.path());
    CHECK(back.rejected.empty());
    CHECK(*back.snapshot == *snap);
  }
}

TEST_CASE("load_parquet reports schema errors and rejected rows") {
  auto good = make_case("FC", "2024 FC 1", "Fine.");
  auto bad = make_case("FC", "2024 FC 2", "");
  std::vector<const DocumentRecord*> rows = {&good, &bad};

  SUBCASE("missing column") {
    TempDir dir;
    auto t = records_to_table(rows, DocumentKind::kCase);
    auto it = std::find_if(t.fields.begin(), t.fields.end(), [](auto& f) { return f.name == "unofficial_text_en"; });
    auto idx = static_cast<std::size_t>(it - t.fields.begin());
    t.fields.erase(it);
    t.columns.erase(t.columns.begin() + static_cast<std::ptrdiff_t>(idx));
    std::filesystem::create_directories(dir / "cases");
    parquet::write_file(dir / "cases/x.parquet", t);
    try {
      load_parquet(dir.path());
      FAIL("expected a schema error");
    } catch (const SchemaError& e) {
      CHECK(e.columns() == std::vector<std::string>{"unofficial_text_en"});
      CHECK(std::string(e.what()).find("unofficial_text_en") != std::string::npos);
    }
  }
  SUBCASE("row without text") {
    TempDir dir;
    std::filesystem::create_directories(dir / "cases");
    parquet::write_file(dir / "cases/x.parquet", records_to_table(rows, DocumentKind::kCase));
    auto res = load_parquet(dir.path());
    REQUIRE(res.rejected.size() == 1);
    CHECK(res.rejected[0].row == 1);
    CHECK(res.rejected[0].violations[0].code == "no_text");
    CHECK(res.snapshot->size() == 1);
  }
}

TEST_CASE("pyarrow reads the export") {
  if (std::system("python3 -c 'import pyarrow' >/dev/null 2>&1") != 0) {
    MESSAGE("pyarrow not available; skipped");
    return;
  }
  std::mt19937 rng(9);
  auto snap = CorpusSnapshot::make(random_corpus(rng, 25), 3);
  TempDir dir;
  export_parquet(*snap, dir.path());
  std::size_t cases = 0, laws = 0;
  for (auto& r : snap->records()) (r->kind == DocumentKind::kLaw ? laws : cases)++;
  write_text(dir / "check.py", R"PY(
import sys, json, pyarrow.parquet as pq
d = sys.argv[1]
c = pq.read_table(d + "/cases/cases-00000.parquet")
l = pq.read_table(d + "/laws/laws-00000.parquet")
out = {"cases": c.num_rows, "laws": l.num_rows, "case_cols": c.column_names, "law_cols": l.column_names,
       "sections": [len(x) if x is not None else -1 for x in l.column("unofficial_sections_en").to_pylist()],
       "texts": [x for x in c.column("unofficial_text_en").to_pylist()],
       "dates": [str(x) if x is not None else None for x in c.column("document_date_en").to_pylist()],
       "ts": [x.isoformat() if x is not None else None for x in c.column("scraped_timestamp_en").to_pylist()]}
json.dump(out, open(d + "/out.json", "w"))
)PY");
  std::string cmd = "python3 " + (dir / "check.py").string() + " " + dir.path().string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  auto j = nlohmann::json::parse(read_text(dir / "out.json"));
  CHECK(j["cases"].get<std::size_t>() == cases);
  CHECK(j["laws"].get<std::size_t>() == laws);
  CHECK(j["case_cols"].get<std::vector<std::string>>() == case_columns());
  CHECK(j["law_cols"].get<std::vector<std::string>>() == law_columns());
  std::size_t ci = 0, li = 0;
  for (auto& r : snap->records()) {
    if (r->kind == DocumentKind::kLaw) {
      int expect = r->unofficial_sections_en ? static_cast<int>(r->unofficial_sections_en->size()) : -1;
      CHECK(j["sections"][li++].get<int>() == expect);
      continue;
    }
    auto& t = j["texts"][ci];
    CHECK((t.is_null() ? !r->unofficial_text_en : t.get<std::string>() == *r->unofficial_text_en));
    auto& d = j["dates"][ci];
    CHECK((d.is_null() ? !r->document_date_en : d.get<std::string>() == r->document_date_en->iso()));
    auto& s = j["ts"][ci];
    if (!s.is_null()) CHECK(s.get<std::string>().substr(0, 19) == format_timestamp(*r->scraped_timestamp_en).substr(0, 19));
    ++ci;
  }
}

TEST_CASE("coverage statistics") {
  auto x1 = make_case("X", "2020 X 1", "one two three four five six seven eight nine ten", "2020-01-01");
  std::string twenty;
  for (int i = 0; i < 20; ++i) twenty += "w ";
  auto x2 = make_case("X", "2021 X 2", twenty, "2021-06-30");
  auto snap = CorpusSnapshot::make({x1, x2}, 1);
  auto t = coverage_stats(*snap, WordTokenizer());
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == CoverageRow{"X", date("2020-01-01"), date("2021-06-30"), 2, 30});
  CHECK(t.total_documents == 2);
  CHECK(t.total_tokens == 30);

  auto empty = coverage_stats(CorpusSnapshot(), WordTokenizer());
  CHECK(empty.rows.empty());
  CHECK(empty.total_documents == 0);
  CHECK(empty.total_tokens == 0);
}

TEST_CASE("coverage totals equal column sums on random corpora") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto snap = CorpusSnapshot::make(random_corpus(rng, 50), 1);
    auto t = coverage_stats(*snap, WordTokenizer());
    std::uint64_t docs = 0, toks = 0;
    for (auto& r : t.rows) {
      docs += r.documents;
      toks += r.tokens;
      CHECK(r.documents >= 1);
      if (r.earliest) CHECK(*r.earliest <= *r.latest);
    }
    CHECK(docs == snap->size());
    CHECK(t.total_documents == docs);
    CHECK(t.total_tokens == toks);
  }
}
