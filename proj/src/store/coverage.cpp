#include "openlex/store/coverage.hpp"

#include <map>
#include <string_view>

#include "openlex/kernels/kernels.hpp"

namespace openlex {

CoverageTable coverage_stats(const CorpusSnapshot& snap, const Tokenizer& tokenizer,
                             std::optional<DocumentKind> kind) {
  CoverageTable t;
  t.tokenizer = tokenizer.name();
  std::vector<const DocumentRecord*> recs;
  std::vector<std::string_view> texts;
  std::vector<std::size_t> owner;
  for (auto& r : snap.records()) {
    if (kind && r->kind != *kind) continue;
    for (Language l : kLanguages) {
      if (!r->text(l)) continue;
      texts.push_back(*r->text(l));
      owner.push_back(recs.size());
    }
    recs.push_back(r.get());
  }
  auto counts = kernels::parallel::token_counts(texts, tokenizer);
  std::vector<std::uint64_t> per_record(recs.size(), 0);
  for (std::size_t i = 0; i < counts.size(); ++i) per_record[owner[i]] += counts[i];

  std::map<std::string, CoverageRow> rows;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const DocumentRecord& r = *recs[i];
    CoverageRow& row = rows[r.dataset];
    row.dataset = r.dataset;
    ++row.documents;
    row.tokens += per_record[i];
    if (auto d = primary_date(r)) {
      if (!row.earliest || *d < *row.earliest) row.earliest = d;
      if (!row.latest || *d > *row.latest) row.latest = d;
    }
  }
  for (auto& [ds, row] : rows) {
    t.total_documents += row.documents;
    t.total_tokens += row.tokens;
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string coverage_tsv(const CoverageTable& t) {
  std::string out = "dataset\tearliest\tlatest\tdocuments\ttokens\n";
  auto date = [](const std::optional<Date>& d) { return d ? d->iso() : std::string(); };
  for (auto& r : t.rows)
    out += r.dataset + '\t' + date(r.earliest) + '\t' + date(r.latest) + '\t' + std::to_string(r.documents) +
           '\t' + std::to_string(r.tokens) + '\n';
  out += "TOTAL\t\t\t" + std::to_string(t.total_documents) + '\t' + std::to_string(t.total_tokens) + '\n';
  return out;
}

}  // namespace openlex
