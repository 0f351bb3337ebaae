#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "medsearch/corpus_tokens.h"
#include "medsearch/index.h"
#include "medsearch/search.h"
#include "medsearch/sgns.h"
#include "support/fixtures.h"

using namespace medsearch;

namespace {

const testing::SyntheticCorpus& corpus_10k() {
  static const auto corpus = testing::make_corpus({.documents = 10000, .vocabulary = 500, .journals = 60}, 1);
  return corpus;
}

void BM_ColdSearch(benchmark::State& state) {
  static const auto snap = testing::make_snapshot(testing::make_store(corpus_10k()), 100, 1);
  std::mt19937_64 rng(2);
  std::vector<SearchRequest> requests;
  while (requests.size() < 256) {
    SearchRequest req{testing::random_query(corpus_10k(), rng), kAllCategories[rng() % 3], 1};
    try {
      rank_query(*snap, req.query, req.category, BoostTable(), 2024);
      requests.push_back(std::move(req));
    } catch (const EmptyQueryError&) {
    }
  }
  SearchOptions options;
  options.current_year = 2024;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(execute_search(requests[i++ % requests.size()], *snap, options));
  }
}
BENCHMARK(BM_ColdSearch)->Unit(benchmark::kMillisecond);

void BM_BuildIndex(benchmark::State& state) {
  const auto corpus = testing::make_corpus({.documents = static_cast<std::size_t>(state.range(0))}, 3);
  const auto tokenized = tokenize_corpus(testing::make_store(corpus), TextPipeline());
  for (auto _ : state) benchmark::DoNotOptimize(build_index(tokenized.documents));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SgnsStep(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t k = 5;
  std::mt19937_64 rng(4);
  std::normal_distribution<float> normal(0.0f, 0.1f);
  std::vector<float> params((2 + k) * dim), gc(dim), go(dim), gn(k * dim);
  for (auto& x : params) x = normal(rng);
  const std::span<const float> all(params);
  std::vector<std::span<const float>> negs;
  for (std::size_t j = 0; j < k; ++j) negs.push_back(all.subspan((2 + j) * dim, dim));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgns::pair_loss_and_gradient<float>(all.subspan(0, dim), all.subspan(dim, dim),
                                                                 negs, gc, go, gn));
  }
}
BENCHMARK(BM_SgnsStep)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
