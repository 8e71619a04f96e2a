#include "doctest.h"

#include <sstream>

#include "json.hpp"
#include "openlex/analytics/digest.hpp"
#include "openlex/analytics/stats.hpp"
#include "openlex/cli/cli.hpp"
#include "openlex/store/coverage.hpp"
#include "test_support.hpp"

using namespace openlex;
using namespace openlex::testing;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run openlex_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// A store directory holding the case fixtures and the analytics fixtures.
struct FixtureStore {
  TempDir dir;
  std::string path;
  FixtureStore() {
    path = (dir.path() / "corpus").string();
    Store store{std::filesystem::path(path)};
    auto docs = fixture_corpus();
    for (auto& d : read_jsonl(fixtures() / "analytics" / "fc_decisions.jsonl")) docs.push_back(d);
    REQUIRE(store.upsert(docs).accepted());
  }
};

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(openlex_cli({}).code == 2);
  auto bogus = openlex_cli({"--corpus", "/tmp/none", "frobnicate"});
  CHECK(bogus.code == 2);
  CHECK(bogus.err.find("Usage:") != std::string::npos);
  CHECK(openlex_cli({"stats"}).code == 2);  // no corpus
  CHECK(openlex_cli({"--corpus", "/tmp/none", "stats", "--bogus-flag"}).code == 2);
  CHECK(openlex_cli({"--corpus", "/tmp/none", "digest", "--dataset", "FC"}).code == 2);  // no week
  CHECK(openlex_cli({"--corpus", "/tmp/none", "stats", "--format", "xml"}).code == 2);
}

TEST_CASE("every subcommand has help") {
  for (auto sub : {"ingest", "serve-api", "serve-mcp", "export-parquet", "stats", "readability", "wordcount-by-judge",
                   "weekly-volume", "digest", "validate"}) {
    auto r = openlex_cli({sub, "--help"});
    CHECK_MESSAGE(r.code == 0, sub);
    CHECK_MESSAGE(r.out.find("Usage:") != std::string::npos, sub);
  }
  CHECK(openlex_cli({"--version"}).code == 0);
}

TEST_CASE("stats matches the coverage computation") {
  FixtureStore fx;
  auto r = openlex_cli({"--corpus", fx.path, "stats"});
  REQUIRE(r.code == 0);
  auto expected = coverage_tsv(coverage_stats(*load_store_snapshot(fx.path), WordTokenizer()));
  CHECK(r.out == expected);
  CHECK(r.out.rfind("dataset\tearliest\tlatest\tdocuments\ttokens\n", 0) == 0);
  CHECK(r.out.find("FC\t2024-02-05\t2025-08-07\t9\t") != std::string::npos);
  auto j = nlohmann::json::parse(openlex_cli({"--corpus", fx.path, "stats", "--format", "json"}).out);
  CHECK(j["total_documents"] == 12);
  CHECK(openlex_cli({"--corpus", fx.path, "stats"}).out == r.out);
}

TEST_CASE("reports are byte-identical across runs") {
  FixtureStore fx;
  std::vector<std::vector<std::string>> cmds = {
      {"readability", "--dataset", "FC"},
      {"wordcount-by-judge", "--dataset", "FC", "--topic", "imm"},
      {"wordcount-by-judge", "--dataset", "FC", "--view", "extremes", "-n", "1", "--format", "json"},
      {"weekly-volume", "--dataset", "FC", "--by", "year"},
      {"weekly-volume", "--dataset", "FC", "--format", "json"},
      {"digest", "--dataset", "FC", "--week", "2025-W29", "--topic", "imm", "--script"},
      {"validate"},
  };
  for (auto& c : cmds) {
    std::vector<std::string> args{"--corpus", fx.path};
    args.insert(args.end(), c.begin(), c.end());
    auto a = openlex_cli(args), b = openlex_cli(args);
    CHECK_MESSAGE(a.code == 0, (c[0] + " " + a.err));
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("analytics subcommands") {
  FixtureStore fx;
  auto judges = openlex_cli({"--corpus", fx.path, "wordcount-by-judge", "--dataset", "FC", "--topic", "imm"});
  auto snap = load_store_snapshot(fx.path);
  auto table = analytics::median_wordcount_by_judge(*snap, "FC", analytics::Topic::kImmigration);
  CHECK(judges.out == analytics::judge_table_tsv(table.rows));

  auto vol = openlex_cli({"--corpus", fx.path, "weekly-volume", "--dataset", "FC"});
  CHECK(vol.out == analytics::weekly_volume_tsv(analytics::weekly_volume(*snap, "FC")));

  CHECK(openlex_cli({"--corpus", fx.path, "readability", "--dataset", "NOPE"}).code == 1);
  CHECK(openlex_cli({"--corpus", fx.path, "readability", "--dataset", "FC", "--from", "2025", "--to", "2024"}).code == 1);
  CHECK(openlex_cli({"--corpus", fx.path, "digest", "--dataset", "FC", "--week", "2025-W99"}).code == 1);
}

TEST_CASE("digest writes memo and script files") {
  FixtureStore fx;
  auto memo = (fx.dir.path() / "out" / "memo.txt").string();
  auto r = openlex_cli({"--corpus", fx.path, "digest", "--dataset", "FC", "--week", "2025-W32", "--script", "--out", memo});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  auto memo_text = read_text(memo);
  auto script = read_text(fx.dir.path() / "out" / "memo.script.txt");
  CHECK(memo_text.find("- Total decisions: 2\n- Allowed: 1\n") != std::string::npos);
  for (auto cit : {"2025 FC 1402", "2025 FC 1415"}) CHECK(analytics::count_citation(script, cit) == 1);

  auto j = nlohmann::json::parse(openlex_cli({"--corpus", fx.path, "digest", "--dataset", "FC", "--week", "2025-W32", "--format", "json"}).out);
  CHECK(j["decisions"] == 2);
  CHECK(j["summaries"].size() == 2);
  CHECK(j["summaries"][0]["outcome"] == "allowed");
}

TEST_CASE("ingest from a registry is idempotent") {
  TempDir dir;
  auto corpus = (dir.path() / "corpus").string();
  auto registry = (fixtures() / "cli" / "registry_local.json").string();
  auto first = openlex_cli({"--corpus", corpus, "ingest", "--registry", registry});
  REQUIRE_MESSAGE(first.code == 0, first.err);
  CHECK(first.out.find("RPD\tfile-drop\t2\t2\t0\t0\t0\t0\t") != std::string::npos);
  CHECK(first.out.find("LEGISLATION-FED\tlaw-repo-sync\t1\t1\t0\t0\t0\t0\t") != std::string::npos);
  auto bytes = read_text(dir.path() / "corpus" / "corpus.jsonl");

  auto second = openlex_cli({"--corpus", corpus, "ingest", "--registry", registry, "--format", "json"});
  REQUIRE(second.code == 0);
  auto j = nlohmann::json::parse(second.out);
  for (auto& row : j) CHECK(row["duplicate"] == row["fetched"]);
  CHECK(read_text(dir.path() / "corpus" / "corpus.jsonl") == bytes);

  auto only = openlex_cli({"--corpus", corpus, "ingest", "--registry", registry, "--channel", "file-drop"});
  CHECK(only.out.find("LEGISLATION-FED") == std::string::npos);
  CHECK(openlex_cli({"--corpus", corpus, "ingest", "--registry", registry, "--source", "SCC"}).code == 1);

  CHECK(openlex_cli({"--corpus", corpus, "validate", "--registry", registry}).code == 0);
  auto other = dir.path() / "other.json";
  write_text(other, R"([{"dataset":"RPD","kind":"case","channel":"file-drop","drop_path":"x","license_text":"Other terms"}])");
  auto bad = openlex_cli({"--corpus", corpus, "validate", "--registry", other.string()});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("license_mismatch") != std::string::npos);
  CHECK(bad.out.find("unregistered_dataset") != std::string::npos);
}

TEST_CASE("export and validate a parquet copy") {
  FixtureStore fx;
  auto out = (fx.dir.path() / "export").string();
  auto r = openlex_cli({"--corpus", fx.path, "export-parquet", "--out", out});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("cases/cases-00000.parquet\t12\t") != std::string::npos);
  CHECK(openlex_cli({"--corpus", fx.path, "validate", "--parquet", out}).code == 0);
}
