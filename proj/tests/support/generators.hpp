#pragma once

// Random corpora and brute-force reference implementations shared by the
// unit tests and the acceptance run.

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "openlex/model/validate.hpp"
#include "openlex/search/search.hpp"
#include "openlex/text/utf8.hpp"
#include "test_support.hpp"

namespace openlex::testing {

// Valid corpus with every optional field toggled at random.
inline std::string random_text(std::mt19937& rng, int words) {
  static const char* vocab[] = {"the", "court", "appeal", "refugee", "décision", "juge", "été",
                                "allowed", "dismissed", "Minister", "l’appel", "2024", "s. 7"};
  std::string s;
  for (int i = 0; i < words; ++i) {
    if (i) s += (rng() % 9 == 0) ? "\n" : " ";
    s += vocab[rng() % std::size(vocab)];
  }
  return s + ".";
}

inline std::vector<DocumentRecord> random_corpus(std::mt19937& rng, int n) {
  std::vector<DocumentRecord> out;
  const char* datasets[] = {"SCC", "FC", "FCA", "TCC", "LEGISLATION-FED"};
  for (int i = 0; i < n; ++i) {
    DocumentRecord r;
    r.dataset = datasets[rng() % 5];
    r.kind = r.dataset == std::string("LEGISLATION-FED") ? DocumentKind::kLaw : DocumentKind::kCase;
    bool en = rng() % 4 != 0;
    bool fr = !en || rng() % 2 == 0;
    std::string cit = "20" + std::to_string(10 + rng() % 15) + " " + r.dataset + " " + std::to_string(i);
    if (en) r.citation_en = cit;
    if (fr) r.citation_fr = cit;
    if (rng() % 3 == 0) r.citation2_en = "IMM-" + std::to_string(rng() % 9000) + "-23";
    if (rng() % 4 == 0) r.citation2_fr = "";
    for (Language l : kLanguages) {
      bool on = l == Language::kEn ? en : fr;
      if (!on) continue;
      if (rng() % 5) r.name(l) = "Name " + random_text(rng, 3);
      if (rng() % 5) r.document_date(l) = Date::from_days(11000 + static_cast<int>(rng() % 9000));
      r.url(l) = "https://example.test/" + std::to_string(i) + "/" + std::string(to_string(l));
      r.scraped_timestamp(l) = Timestamp{std::chrono::seconds{1'600'000'000 + static_cast<long>(rng() % 100'000'000)}};
      r.text(l) = random_text(rng, 5 + static_cast<int>(rng() % 60));
      if (r.kind == DocumentKind::kLaw) {
        int kindsel = static_cast<int>(rng() % 4);
        if (kindsel == 0) continue;  // null list
        std::vector<LawSection> secs;
        int ns = kindsel == 1 ? 0 : 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < ns; ++k) {
          LawSection s{std::to_string(k + 1) + (k % 2 ? "(1)" : ""), std::nullopt, random_text(rng, 4)};
          if (rng() % 2) s.heading = random_text(rng, 2);
          if (rng() % 5 == 0) s.heading = "";
          secs.push_back(std::move(s));
        }
        r.sections(l) = std::move(secs);
      }
    }
    if (r.document_date_en && r.document_date_fr) r.document_date_fr = r.document_date_en;
    r.upstream_license = rng() % 2 ? "Terms A | reproduced" : "Open Government Licence - Canada";
    if (!validate_record(r).ok()) throw std::logic_error("generator produced an invalid record");
    out.push_back(std::move(r));
  }
  return out;
}

// ---- search ----------------------------------------------------------------

// Folded words split on anything outside [a-z0-9].
inline std::vector<std::string> oracle_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text::fold(s)) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<std::string> doc_words(const DocumentRecord& r) {
  std::vector<std::string> out;
  for (Language l : kLanguages)
    if (r.text(l))
      for (auto& w : oracle_words(*r.text(l))) out.push_back(w);
  return out;
}

inline bool oracle_matches(const DocumentRecord& r, const QuerySpec& q) {
  if (q.kind && r.kind != *q.kind) return false;
  if (!q.datasets.empty() && std::count(q.datasets.begin(), q.datasets.end(), r.dataset) == 0) return false;
  if (q.date_from || q.date_to) {
    auto d = primary_date(r);
    if (!d) return false;
    if (q.date_from && *d < *q.date_from) return false;
    if (q.date_to && *d > *q.date_to) return false;
  }
  if (q.citation) {
    bool hit = false;
    for (Language l : kLanguages)
      for (auto& c : {r.citation(l), r.citation2(l)})
        if (c && normalize_citation(*c) == normalize_citation(*q.citation)) hit = true;
    if (!hit) return false;
  }
  if (q.name) {
    auto needle = text::fold(*q.name);
    bool hit = false;
    for (Language l : kLanguages)
      if (text::fold(r.name(l).value_or("")).find(needle) != std::string::npos) hit = true;
    if (!hit) return false;
  }
  if (q.text) {
    auto words = doc_words(r);
    for (auto& t : oracle_words(*q.text))
      if (std::find(words.begin(), words.end(), t) == words.end()) return false;
  }
  return true;
}

inline double oracle_score(const DocumentRecord& r, const QuerySpec& q) {
  if (!q.text) return 0.0;
  auto words = doc_words(r);
  std::vector<std::string> terms;
  for (auto& t : oracle_words(*q.text))
    if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
  double s = 0.0;
  for (auto& t : terms)
    s += static_cast<double>(std::count(words.begin(), words.end(), t)) / static_cast<double>(words.size());
  return s;
}

inline std::vector<RecordKey> oracle_ranked(const CorpusSnapshot& snap, const QuerySpec& q) {
  std::vector<const DocumentRecord*> m;
  for (auto& r : snap.records())
    if (oracle_matches(*r, q)) m.push_back(r.get());
  std::stable_sort(m.begin(), m.end(), [&](auto* a, auto* b) {
    double sa = oracle_score(*a, q), sb = oracle_score(*b, q);
    if (sa != sb) return sa > sb;
    auto da = primary_date(*a), db = primary_date(*b);
    if (da != db) return da && (!db || *da > *db);
    if (primary_citation(*a) != primary_citation(*b)) return primary_citation(*a) < primary_citation(*b);
    return a->dataset < b->dataset;
  });
  std::vector<RecordKey> out;
  for (auto* r : m) out.push_back(record_key(*r));
  return out;
}

inline const char* kSearchVocab[] = {"refugee", "appeal", "Minister", "décision", "tax", "costs", "review", "claimant",
                        "persécution", "allowed", "dismissed", "Haiti", "crown", "évidence", "trial"};
inline const char* kSearchDatasets[] = {"FC", "SCC", "TCC", "IRB"};

inline std::vector<DocumentRecord> random_search_corpus(std::mt19937& rng, int n) {
  std::vector<DocumentRecord> out;
  auto word = [&] { return std::string(kSearchVocab[rng() % std::size(kSearchVocab)]); };
  for (int i = 0; i < n; ++i) {
    std::string text;
    int len = 1 + static_cast<int>(rng() % 40);
    for (int k = 0; k < len; ++k) text += (k ? (rng() % 9 == 0 ? ". " : " ") : "") + word();
    char day[16];
    std::snprintf(day, sizeof day, "202%u-%02u-%02u", unsigned(rng() % 4), unsigned(1 + rng() % 12),
                  unsigned(1 + rng() % 28));
    auto r = make_case(kSearchDatasets[rng() % std::size(kSearchDatasets)], "2024 X " + std::to_string(i), text, day);
    r.name_en = word() + " v. " + word();
    if (rng() % 5 == 0) r.document_date_en.reset();
    if (rng() % 4 == 0) {
      r.citation_fr = "2024 Y " + std::to_string(i);
      r.unofficial_text_fr = word() + " " + word();
      r.name_fr = word();
    }
    if (rng() % 6 == 0) r.citation2_en = "IMM-" + std::to_string(rng() % 5) + "-23";
    out.push_back(std::move(r));
  }
  return out;
}

inline QuerySpec random_query(std::mt19937& rng, const std::vector<DocumentRecord>& docs) {
  QuerySpec q;
  do {
    if (rng() % 2) {
      q.text = kSearchVocab[rng() % std::size(kSearchVocab)];
      if (rng() % 3 == 0) *q.text += std::string(" ") + kSearchVocab[rng() % std::size(kSearchVocab)];
    }
    if (rng() % 5 == 0) {
      const auto& d = docs[rng() % docs.size()];
      q.citation = rng() % 3 == 0 && d.citation2_en ? *d.citation2_en : primary_citation(d);
    }
    if (rng() % 4 == 0) q.name = std::string(kSearchVocab[rng() % std::size(kSearchVocab)]).substr(0, 4);
    if (rng() % 3 == 0) q.date_from = date("2021-06-01");
    if (rng() % 3 == 0) q.date_to = date("2023-03-31");
    if (rng() % 3 == 0) q.datasets = {kSearchDatasets[rng() % 4], kSearchDatasets[rng() % 4]};
  } while (!q.has_criterion());
  q.page_size = 1 + static_cast<int>(rng() % 7);
  return q;
}

}  // namespace openlex::testing
