#include "openlex/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "openlex/analytics/digest.hpp"
#include "openlex/analytics/llm.hpp"
#include "openlex/analytics/stats.hpp"
#include "openlex/api/api.hpp"
#include "openlex/error.hpp"
#include "openlex/ingest/fetch.hpp"
#include "openlex/ingest/ingest.hpp"
#include "openlex/mcp/mcp.hpp"
#include "openlex/model/source.hpp"
#include "openlex/store/coverage.hpp"
#include "openlex/store/parquet_io.hpp"

namespace openlex::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "openlex 1.0.0";

struct Options {
  std::string corpus;
  std::string out;
  std::string format = "tsv";
  std::string tokenizer = "word-fallback";
  std::string merges;

  // ingest
  std::string registry;
  std::string channel;
  std::vector<std::string> sources;
  double delay = -1;

  // serving
  std::string listen;
  std::string transport = "stdio";
  std::size_t truncate = mcp::kDefaultTruncateLimit;

  // analytics
  std::string dataset;
  std::string topic = "all";
  std::optional<int> from_year, to_year;
  std::string from_date, to_date;
  std::string patterns;
  std::string view = "all";
  std::size_t extremes = 5;
  std::string by = "week";
  std::string week;
  bool script = false;
  bool llm = false;

  // validate
  std::string parquet_dir;
};

class Failure : public Error {
 public:
  using Error::Error;
};

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  fs::path p(o.out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + o.out);
  f << text;
  if (!f) throw IoError("cannot write " + o.out);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

SnapshotPtr open_snapshot(const Options& o) { return load_store_snapshot(o.corpus); }

std::shared_ptr<const Tokenizer> tokenizer_for(const Options& o) { return make_tokenizer(o.tokenizer, o.merges); }

std::pair<std::string, int> parse_listen(const std::string& s, int default_port) {
  if (s.empty()) return {"127.0.0.1", default_port};
  auto colon = s.rfind(':');
  if (colon == std::string::npos) return {s, default_port};
  int port = 0;
  try {
    port = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad listen address " + s);
  }
  if (port <= 0 || port > 65535) throw ConfigError("bad listen port in " + s);
  return {s.substr(0, colon), port};
}

analytics::Topic topic_of(const Options& o) {
  auto t = analytics::parse_topic(o.topic);
  if (!t) throw ConfigError("unknown topic " + o.topic + " (all or imm)");
  return *t;
}

std::optional<Date> date_opt(const std::string& s, const char* flag) {
  if (s.empty()) return std::nullopt;
  auto d = Date::from_iso(s);
  if (!d) throw ConfigError(std::string(flag) + " must be YYYY-MM-DD");
  return d;
}

ordered_json null_or(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

bool is_url(const std::string& s) { return s.find("://") != std::string::npos; }

// Local paths in a registry are relative to the registry file.
void resolve_paths(SourceDescriptor& s, const fs::path& base) {
  auto fix = [&](std::string& p) {
    if (!p.empty() && !is_url(p) && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
  };
  fix(s.repo_path);
  fix(s.drop_path);
  fix(s.listing_url);
  fix(s.feed_url);
}

// ---- commands --------------------------------------------------------------

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  auto sources = load_source_registry(o.registry);
  fs::path base = fs::path(o.registry).parent_path();
  std::optional<Channel> channel;
  if (!o.channel.empty()) {
    channel = parse_channel(o.channel);
    if (!channel) throw ConfigError("unknown channel " + o.channel);
  }
  Store store{fs::path(o.corpus)};
  ingest::HttpFetcher http;
  int status = kExitOk;
  ordered_json rows = ordered_json::array();
  std::string tsv = "dataset\tchannel\tfetched\tnew\tupdated\tduplicate\tskipped\tfailed\tsnapshot_version\n";
  std::set<std::string> wanted(o.sources.begin(), o.sources.end());
  std::size_t ran = 0;
  for (auto& src : sources) {
    if (channel && src.channel != *channel) continue;
    if (!wanted.empty() && !wanted.count(src.dataset)) continue;
    ++ran;
    resolve_paths(src, base);
    if (o.delay >= 0) src.politeness_delay = o.delay;
    ingest::PoliteFetcher polite(http, std::chrono::duration<double>(src.politeness_delay));
    ingest::IngestReport rep;
    try {
      rep = ingest::run_source(src, polite, store, fs::path(o.corpus) / "state");
    } catch (const std::exception& e) {
      err << "error: " << src.dataset << " (" << to_string(src.channel) << "): " << e.what() << "\n";
      status = kExitFailure;
      continue;
    }
    for (auto& n : rep.notes) err << src.dataset << "\t" << n.item << "\t" << n.code << "\t" << n.message << "\n";
    tsv += src.dataset + "\t" + std::string(to_string(src.channel)) + "\t" + std::to_string(rep.fetched) + "\t" +
           std::to_string(rep.new_records) + "\t" + std::to_string(rep.updated) + "\t" +
           std::to_string(rep.duplicate) + "\t" + std::to_string(rep.skipped) + "\t" + std::to_string(rep.failed) +
           "\t" + std::to_string(rep.snapshot_version) + "\n";
    ordered_json r;
    r["dataset"] = src.dataset;
    r["channel"] = to_string(src.channel);
    r["fetched"] = rep.fetched;
    r["new"] = rep.new_records;
    r["updated"] = rep.updated;
    r["duplicate"] = rep.duplicate;
    r["skipped"] = rep.skipped;
    r["failed"] = rep.failed;
    r["snapshot_version"] = rep.snapshot_version;
    r["notes"] = ordered_json::array();
    for (auto& n : rep.notes) r["notes"].push_back({{"item", n.item}, {"code", n.code}, {"message", n.message}});
    rows.push_back(std::move(r));
  }
  if (ran == 0) throw ConfigError("no registry source matches the given filters");
  emit(o, out, o.format == "json" ? dump(rows) : tsv);
  return status;
}

int cmd_serve_api(const Options& o, std::ostream& out, std::ostream&) {
  auto [host, port] = parse_listen(o.listen, 8080);
  auto index = std::make_shared<DirectoryIndex>(o.corpus);
  index->current();
  api::Service service([index] { return index->current(); }, tokenizer_for(o));
  out << "serving " << o.corpus << " on http://" << host << ":" << port << "/v1\n" << std::flush;
  api::serve(service, host, port);
  return kExitOk;
}

int cmd_serve_mcp(const Options& o, std::ostream& out, std::ostream& err) {
  auto index = std::make_shared<DirectoryIndex>(o.corpus);
  index->current();
  mcp::Server server([index] { return index->current(); }, tokenizer_for(o), o.truncate);
  if (o.transport == "stdio") {
    server.serve_stdio(std::cin, out);
    return kExitOk;
  }
  auto [host, port] = parse_listen(o.listen, 8765);
  err << "serving " << o.corpus << " on http://" << host << ":" << port << "/mcp\n" << std::flush;
  mcp::serve_http(server, host, port);
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream&) {
  auto snap = open_snapshot(o);
  auto manifest = export_parquet(*snap, o.out, *tokenizer_for(o));
  std::string text = "path\trows\tbytes\n";
  for (auto& f : manifest.files) text += f.path + "\t" + std::to_string(f.rows) + "\t" + std::to_string(f.bytes) + "\n";
  out << text;
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  std::optional<DocumentKind> kind;
  if (o.view != "all") {
    kind = parse_kind(o.view);
    if (!kind) throw ConfigError("--kind must be case or law");
  }
  auto table = coverage_stats(*open_snapshot(o), *tokenizer_for(o), kind);
  emit(o, out, o.format == "json" ? dump(api::to_json(table)) : coverage_tsv(table));
  return kExitOk;
}

int cmd_readability(const Options& o, std::ostream& out, std::ostream&) {
  auto snap = open_snapshot(o);
  int first = o.from_year.value_or(0), last = o.to_year.value_or(0);
  if (!o.from_year || !o.to_year) {
    std::optional<int> lo, hi;
    for (auto& r : snap->records())
      if (r->dataset == o.dataset && r->kind == DocumentKind::kCase)
        if (auto d = primary_date(*r)) {
          lo = std::min(lo.value_or(d->year()), d->year());
          hi = std::max(hi.value_or(d->year()), d->year());
        }
    if (!lo) throw InvalidQuery("no dated decisions for dataset " + o.dataset);
    if (!o.from_year) first = *lo;
    if (!o.to_year) last = *hi;
  }
  auto rows = analytics::readability_trend(*snap, o.dataset, first, last, topic_of(o));
  if (o.format == "json") {
    ordered_json j = ordered_json::array();
    for (auto& r : rows) j.push_back({{"year", r.year}, {"median", null_or(r.median)}, {"n", r.decisions}});
    emit(o, out, dump(j));
  } else {
    emit(o, out, analytics::readability_tsv(rows));
  }
  return kExitOk;
}

int cmd_judges(const Options& o, std::ostream& out, std::ostream&) {
  auto snap = open_snapshot(o);
  if (!snap->has_dataset(o.dataset)) throw InvalidQuery("unknown dataset " + o.dataset);
  auto patterns = o.patterns.empty() ? analytics::default_judge_patterns() : analytics::load_judge_patterns(o.patterns);
  auto table = analytics::median_wordcount_by_judge(*snap, o.dataset, topic_of(o), date_opt(o.from_date, "--from"),
                                                    date_opt(o.to_date, "--to"), patterns);
  if (o.view != "all" && o.view != "extremes") throw ConfigError("--view must be all or extremes");
  auto rows = o.view == "extremes" ? analytics::lowest_and_highest(table, o.extremes) : table.rows;
  if (o.format == "json") {
    ordered_json j;
    j["rows"] = ordered_json::array();
    for (auto& r : rows) j["rows"].push_back({{"judge", r.judge}, {"median_words", r.median_words}, {"decisions", r.decisions}});
    j["decisions"] = table.decisions;
    j["unknown_judge"] = table.unknown;
    j["patterns_version"] = patterns.version;
    emit(o, out, dump(j));
  } else {
    emit(o, out, analytics::judge_table_tsv(rows));
  }
  return kExitOk;
}

int cmd_volume(const Options& o, std::ostream& out, std::ostream&) {
  auto snap = open_snapshot(o);
  if (!snap->has_dataset(o.dataset)) throw InvalidQuery("unknown dataset " + o.dataset);
  auto v = analytics::weekly_volume(*snap, o.dataset, topic_of(o));
  if (o.by != "week" && o.by != "year") throw ConfigError("--by must be week or year");
  if (o.format == "json") {
    ordered_json j = ordered_json::array();
    if (o.by == "week")
      for (auto& w : v.weeks) j.push_back({{"week", w.week.str()}, {"words", w.words}, {"n", w.decisions}});
    else
      for (auto& y : v.years)
        j.push_back({{"year", y.year}, {"median_weekly_words", y.median_weekly_words}, {"weeks", y.weeks}});
    emit(o, out, dump(j));
  } else {
    emit(o, out, o.by == "week" ? analytics::weekly_volume_tsv(v) : analytics::yearly_volume_tsv(v));
  }
  return kExitOk;
}

ordered_json memo_json(const analytics::DigestMemo& m) {
  ordered_json j;
  j["dataset"] = m.dataset;
  j["period"] = m.period.str();
  j["topic"] = analytics::to_string(m.topic);
  j["decisions"] = m.decisions;
  j["allowed"] = m.allowed;
  j["words"] = m.words;
  j["key_themes"] = m.key_themes;
  j["summaries"] = ordered_json::array();
  for (auto& s : m.summaries)
    j["summaries"].push_back({{"citation", s.citation},
                              {"name", s.name},
                              {"judge", s.judge ? ordered_json(*s.judge) : ordered_json(nullptr)},
                              {"category", s.category},
                              {"outcome", analytics::to_string(s.outcome)},
                              {"words", s.words},
                              {"facts", s.facts},
                              {"errors", s.errors}});
  return j;
}

fs::path script_path(const std::string& memo_path) {
  fs::path p(memo_path);
  return p.parent_path() / (p.stem().string() + ".script" + p.extension().string());
}

int cmd_digest(const Options& o, std::ostream& out, std::ostream& err) {
  auto week = IsoWeek::parse(o.week);
  if (!week) throw ConfigError("--week must look like 2025-W32");
  auto snap = open_snapshot(o);
  if (!snap->has_dataset(o.dataset)) throw InvalidQuery("unknown dataset " + o.dataset);

  analytics::KeywordClassifier keyword;
  analytics::TemplateSummarizer templ;
  std::optional<analytics::LlmClient> client;
  std::unique_ptr<analytics::Classifier> llm_cls;
  std::unique_ptr<analytics::Summarizer> llm_sum;
  if (o.llm) {
    auto cfg = analytics::LlmConfig::from_env();
    if (!cfg) throw ConfigError("--llm needs OPENLEX_LLM_BASE_URL and OPENLEX_LLM_MODEL");
    client.emplace(*cfg);
    llm_cls = std::make_unique<analytics::LlmClassifier>(*client);
    llm_sum = std::make_unique<analytics::LlmSummarizer>(*client);
  }
  const analytics::Classifier& cls = llm_cls ? *llm_cls : static_cast<const analytics::Classifier&>(keyword);
  const analytics::Summarizer& sum = llm_sum ? *llm_sum : static_cast<const analytics::Summarizer&>(templ);
  auto memo = analytics::weekly_digest(*snap, o.dataset, *week, topic_of(o), cls, sum);

  if (o.format == "json") {
    auto j = memo_json(memo);
    if (o.script) j["script"] = analytics::digest_to_script(memo);
    emit(o, out, dump(j));
    return kExitOk;
  }
  std::string memo_text = analytics::render_memo(memo);
  if (!o.script) {
    emit(o, out, memo_text);
    return kExitOk;
  }
  std::string script = analytics::digest_to_script(memo);
  if (o.out.empty()) {
    out << memo_text << "\n" << script;
    return kExitOk;
  }
  emit(o, out, memo_text);
  Options s = o;
  s.out = script_path(o.out).string();
  emit(s, out, script);
  err << "wrote " << o.out << " and " << s.out << "\n";
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<std::string> problems;
  std::size_t checked = 0;
  auto snap = open_snapshot(o);
  std::vector<DocumentRecord> records;
  for (auto& r : snap->records()) records.push_back(*r);
  checked = records.size();
  for (auto& v : validate_corpus(records).violations) problems.push_back("corpus\t" + v.code + "\t" + v.message);

  if (!o.registry.empty()) {
    auto sources = load_source_registry(o.registry);
    std::map<std::string, std::string> license;
    for (auto& s : sources) {
      for (auto& v : validate_source(s).violations) problems.push_back("registry\t" + v.code + "\t" + s.dataset + ": " + v.message);
      license.emplace(s.dataset, s.license_text);
    }
    for (auto& r : records) {
      auto it = license.find(r.dataset);
      if (it == license.end())
        problems.push_back("license\tunregistered_dataset\t" + record_key(r).str() + ": dataset not in registry");
      else if (r.upstream_license != it->second)
        problems.push_back("license\tlicense_mismatch\t" + record_key(r).str() + ": license differs from registry");
    }
  }
  if (!o.parquet_dir.empty()) {
    auto loaded = load_parquet(o.parquet_dir);
    for (auto& rej : loaded.rejected)
      for (auto& v : rej.violations)
        problems.push_back("parquet\t" + v.code + "\t" + rej.file + " row " + std::to_string(rej.row) + " " + rej.key + ": " + v.message);
  }
  std::string text;
  for (auto& p : problems) text += p + "\n";
  text += std::to_string(checked) + " records checked, " + std::to_string(problems.size()) + " problems\n";
  emit(o, out, text);
  return problems.empty() ? kExitOk : kExitFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Open legal corpus: ingestion, search services, exports and reports", "openlex"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Read options from a TOML or INI file; flags override it");
  app.add_option("--corpus", o.corpus, "Corpus store directory")->envname("OPENLEX_CORPUS");
  app.require_subcommand(1);
  app.fallthrough();

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Write the report to this file"); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"tsv", "json"}));
  };
  auto add_tokenizer = [&](CLI::App* c) {
    c->add_option("--tokenizer", o.tokenizer, "Token counting scheme")->check(CLI::IsMember(tokenizer_schemes()));
    c->add_option("--merges", o.merges, "Merge table for the bpe scheme")->check(CLI::ExistingFile);
  };
  auto add_dataset = [&](CLI::App* c) { c->add_option("--dataset", o.dataset, "Dataset code, e.g. FC")->required(); };
  auto add_topic = [&](CLI::App* c) {
    c->add_option("--topic", o.topic, "Topic filter")->check(CLI::IsMember({"all", "imm", "immigration"}));
  };

  auto* ingest = app.add_subcommand("ingest", "Run ingestion channels from a source registry");
  ingest->add_option("--registry", o.registry, "Source registry JSON")->required()->check(CLI::ExistingFile);
  ingest->add_option("--channel", o.channel, "Only this channel")
      ->check(CLI::IsMember({"listing-scrape", "rss", "law-repo-sync", "file-drop"}));
  ingest->add_option("--source", o.sources, "Only these dataset codes");
  ingest->add_option("--delay", o.delay, "Seconds between fetches to one host, overriding the registry")
      ->check(CLI::NonNegativeNumber);
  add_format(ingest);
  add_out(ingest);

  auto* serve_api = app.add_subcommand("serve-api", "Serve the read-only JSON API");
  serve_api->add_option("--listen", o.listen, "host:port (default 127.0.0.1:8080)");
  add_tokenizer(serve_api);

  auto* serve_mcp = app.add_subcommand("serve-mcp", "Serve corpus tools over the Model Context Protocol");
  serve_mcp->add_option("--transport", o.transport, "stdio or http")->check(CLI::IsMember({"stdio", "http"}));
  serve_mcp->add_option("--listen", o.listen, "host:port for http (default 127.0.0.1:8765)");
  serve_mcp->add_option("--truncate", o.truncate, "Code points of text per response")->check(CLI::PositiveNumber);
  add_tokenizer(serve_mcp);

  auto* export_cmd = app.add_subcommand("export-parquet", "Write the corpus as Parquet files with a dataset card");
  export_cmd->add_option("--out", o.out, "Export directory")->required();
  add_tokenizer(export_cmd);

  auto* stats = app.add_subcommand("stats", "Per-dataset coverage: date range, documents, tokens");
  stats->add_option("--kind", o.view, "case, law or all")->check(CLI::IsMember({"all", "case", "law"}));
  add_tokenizer(stats);
  add_format(stats);
  add_out(stats);

  auto* readability = app.add_subcommand("readability", "Median Flesch reading ease per year");
  add_dataset(readability);
  readability->add_option("--from", o.from_year, "First year");
  readability->add_option("--to", o.to_year, "Last year");
  add_topic(readability);
  add_format(readability);
  add_out(readability);

  auto* judges = app.add_subcommand("wordcount-by-judge", "Median decision length per judge");
  add_dataset(judges);
  add_topic(judges);
  judges->add_option("--from", o.from_date, "Earliest decision date, YYYY-MM-DD");
  judges->add_option("--to", o.to_date, "Latest decision date, YYYY-MM-DD");
  judges->add_option("--patterns", o.patterns, "Judge header pattern file")->check(CLI::ExistingFile);
  judges->add_option("--view", o.view, "all, or extremes for the lowest and highest")
      ->check(CLI::IsMember({"all", "extremes"}));
  judges->add_option("-n", o.extremes, "Rows at each end for --view extremes")->check(CLI::PositiveNumber);
  add_format(judges);
  add_out(judges);

  auto* volume = app.add_subcommand("weekly-volume", "Words published per ISO week, and yearly medians");
  add_dataset(volume);
  add_topic(volume);
  volume->add_option("--by", o.by, "week or year")->check(CLI::IsMember({"week", "year"}));
  add_format(volume);
  add_out(volume);

  auto* digest = app.add_subcommand("digest", "Weekly digest memo, optionally with a podcast script");
  add_dataset(digest);
  digest->add_option("--week", o.week, "ISO week, e.g. 2025-W32")->required();
  add_topic(digest);
  digest->add_flag("--script", o.script, "Also write the podcast script (next to --out as NAME.script.EXT)");
  digest->add_flag("--llm", o.llm, "Use the external language model configured by OPENLEX_LLM_* variables");
  digest->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}))->default_str("text");
  add_out(digest);

  auto* validate = app.add_subcommand("validate", "Check stored records, and optionally a registry or an export");
  validate->add_option("--registry", o.registry, "Also check licenses against this registry")->check(CLI::ExistingFile);
  validate->add_option("--parquet", o.parquet_dir, "Also check a Parquet export")->check(CLI::ExistingDirectory);
  add_out(validate);

  try {
    app.parse(argc, argv);
    if (o.corpus.empty()) throw CLI::RequiredError("--corpus");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  if (digest->parsed() && digest->count("--format") == 0) o.format = "text";
  try {
    if (ingest->parsed()) return cmd_ingest(o, out, err);
    if (serve_api->parsed()) return cmd_serve_api(o, out, err);
    if (serve_mcp->parsed()) return cmd_serve_mcp(o, out, err);
    if (export_cmd->parsed()) return cmd_export(o, out, err);
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (readability->parsed()) return cmd_readability(o, out, err);
    if (judges->parsed()) return cmd_judges(o, out, err);
    if (volume->parsed()) return cmd_volume(o, out, err);
    if (digest->parsed()) return cmd_digest(o, out, err);
    if (validate->parsed()) return cmd_validate(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"openlex"};
  for (auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace openlex::cli
