#include "openlex/kernels/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <map>

#include "openlex/text/utf8.hpp"

namespace openlex::kernels {

DocTerms extract_terms(std::string_view text) {
  std::map<std::string, std::uint32_t, std::less<>> counts;
  DocTerms d;
  text::for_each_term(text, [&](std::string_view term, std::size_t, std::size_t) {
    auto it = counts.find(term);
    if (it == counts.end())
      counts.emplace(std::string(term), 1);
    else
      ++it->second;
    ++d.length;
  });
  d.counts.assign(counts.begin(), counts.end());
  return d;
}

namespace serial {

std::vector<TextMetrics> text_metrics_batch(std::span<const std::string_view> texts) {
  std::vector<TextMetrics> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out[i] = text_metrics(texts[i]);
  return out;
}

std::vector<std::uint64_t> token_counts(std::span<const std::string_view> texts, const Tokenizer& tok) {
  std::vector<std::uint64_t> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out[i] = tok.count(texts[i]);
  return out;
}

std::vector<DocTerms> extract_terms_batch(std::span<const std::string_view> texts) {
  std::vector<DocTerms> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out[i] = extract_terms(texts[i]);
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<TextMetrics> text_metrics_batch(std::span<const std::string_view> texts) {
  std::vector<TextMetrics> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = text_metrics(texts[i]);
  return out;
}

std::vector<std::uint64_t> token_counts(std::span<const std::string_view> texts, const Tokenizer& tok) {
  std::vector<std::uint64_t> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = tok.count(texts[i]);
  return out;
}

std::vector<DocTerms> extract_terms_batch(std::span<const std::string_view> texts) {
  std::vector<DocTerms> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = extract_terms(texts[i]);
  return out;
}

}  // namespace parallel

}  // namespace openlex::kernels
