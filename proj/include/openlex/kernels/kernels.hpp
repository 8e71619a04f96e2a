#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "openlex/analytics/text_metrics.hpp"
#include "openlex/search/tokenizer.hpp"

// Per-document batch loops. `serial` is the reference; `parallel` spreads
// documents over OpenMP threads and must return identical results.
namespace openlex::kernels {

struct DocTerms {
  std::vector<std::pair<std::string, std::uint32_t>> counts;  // sorted by term
  std::uint32_t length = 0;                                   // total term occurrences

  bool operator==(const DocTerms&) const = default;
};

DocTerms extract_terms(std::string_view text);

namespace serial {
std::vector<TextMetrics> text_metrics_batch(std::span<const std::string_view> texts);
std::vector<std::uint64_t> token_counts(std::span<const std::string_view> texts, const Tokenizer& tok);
std::vector<DocTerms> extract_terms_batch(std::span<const std::string_view> texts);
}  // namespace serial

namespace parallel {
std::vector<TextMetrics> text_metrics_batch(std::span<const std::string_view> texts);
std::vector<std::uint64_t> token_counts(std::span<const std::string_view> texts, const Tokenizer& tok);
std::vector<DocTerms> extract_terms_batch(std::span<const std::string_view> texts);
}  // namespace parallel

}  // namespace openlex::kernels
