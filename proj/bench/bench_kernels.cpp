// Serial reference vs OpenMP kernels over a synthetic corpus.
//
//   bench_kernels --benchmark_filter=Metrics
//   OMP_NUM_THREADS=4 bench_kernels

#include <benchmark/benchmark.h>

#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "openlex/kernels/kernels.hpp"

using namespace openlex;

namespace {

const std::vector<std::string>& corpus(std::size_t docs) {
  static std::vector<std::string> texts;
  if (texts.size() >= docs) return texts;
  static const char* vocab[] = {"The",       "applicant", "seeks",     "judicial",  "review",   "of",
                                "a",         "decision",  "by",        "officer",   "refusing", "refugee",
                                "protection", "para.",    "Mr.",       "évidence",  "Minister", "unreasonable",
                                "credibility", "risk",    "return",    "allowed.",  "dismissed.", "2025"};
  std::mt19937 rng(1);
  while (texts.size() < docs) {
    std::string t;
    const int words = 800 + static_cast<int>(rng() % 4000);
    for (int w = 0; w < words; ++w) {
      t += vocab[rng() % std::size(vocab)];
      t += rng() % 15 == 0 ? ".\n" : " ";
    }
    texts.push_back(std::move(t));
  }
  return texts;
}

std::vector<std::string_view> views(std::size_t docs) {
  const auto& texts = corpus(docs);
  return {texts.begin(), texts.begin() + static_cast<std::ptrdiff_t>(docs)};
}

void bytes_processed(benchmark::State& state, const std::vector<std::string_view>& v) {
  std::int64_t bytes = 0;
  for (auto s : v) bytes += static_cast<std::int64_t>(s.size());
  state.SetBytesProcessed(bytes * state.iterations());
}

template <auto Fn>
void run_batch(benchmark::State& state) {
  auto v = views(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(v));
  bytes_processed(state, v);
}

template <auto Fn>
void run_tokens(benchmark::State& state) {
  auto v = views(static_cast<std::size_t>(state.range(0)));
  WordTokenizer tok;
  for (auto _ : state) benchmark::DoNotOptimize(Fn(v, tok));
  bytes_processed(state, v);
}

// Refuse to time kernels that disagree.
void check_agreement() {
  auto v = views(256);
  WordTokenizer tok;
  if (kernels::serial::text_metrics_batch(v) != kernels::parallel::text_metrics_batch(v) ||
      kernels::serial::token_counts(v, tok) != kernels::parallel::token_counts(v, tok) ||
      kernels::serial::extract_terms_batch(v) != kernels::parallel::extract_terms_batch(v)) {
    std::fprintf(stderr, "serial and parallel kernels disagree\n");
    std::exit(1);
  }
}

}  // namespace

BENCHMARK(run_batch<kernels::serial::text_metrics_batch>)->Name("Metrics/serial")->Range(64, 2048)->UseRealTime();
BENCHMARK(run_batch<kernels::parallel::text_metrics_batch>)->Name("Metrics/parallel")->Range(64, 2048)->UseRealTime();
BENCHMARK(run_tokens<kernels::serial::token_counts>)->Name("Tokens/serial")->Range(64, 2048)->UseRealTime();
BENCHMARK(run_tokens<kernels::parallel::token_counts>)->Name("Tokens/parallel")->Range(64, 2048)->UseRealTime();
BENCHMARK(run_batch<kernels::serial::extract_terms_batch>)->Name("Terms/serial")->Range(64, 2048)->UseRealTime();
BENCHMARK(run_batch<kernels::parallel::extract_terms_batch>)->Name("Terms/parallel")->Range(64, 2048)->UseRealTime();

int main(int argc, char** argv) {
  check_agreement();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
