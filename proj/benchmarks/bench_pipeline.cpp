#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "textcoord/embedding.hpp"
#include "textcoord/inducer.hpp"
#include "textcoord/knn.hpp"
#include "textcoord/synth.hpp"

using namespace textcoord;

namespace {

EmbeddingMatrix random_embeddings(std::size_t n, std::size_t dim) {
  std::mt19937 gen(42);
  std::normal_distribution<float> dist(0.0f, 1.0f);
  EmbeddingMatrix m;
  m.dim = dim;
  m.post_ids.resize(n);
  m.data.resize(n * dim);
  for (auto& x : m.data) x = dist(gen);
  for (std::size_t i = 0; i < n; ++i) m.post_ids[i] = "p" + std::to_string(i);
  l2_normalize_rows(m);
  return m;
}

Corpus scenario_corpus(std::size_t background) {
  ScenarioConfig cfg;
  cfg.n_background_users = background;
  cfg.seed = 7;
  return generate_scenario(cfg).first;
}

void BM_EmbedCorpus(benchmark::State& state) {
  Corpus corpus = scenario_corpus(std::size_t(state.range(0)));
  for (auto _ : state) {
    auto m = embed_corpus(corpus, 256, 0);
    benchmark::DoNotOptimize(m.data.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) *
                          int64_t(corpus.n_posts()));
}
BENCHMARK(BM_EmbedCorpus)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildKnn(benchmark::State& state) {
  auto m = random_embeddings(std::size_t(state.range(0)), 128);
  for (auto _ : state) {
    auto adj = build_knn(m);
    benchmark::DoNotOptimize(adj.out_edges.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_BuildKnn)->Arg(1000)->Arg(4000)->Arg(8000)
    ->Unit(benchmark::kMillisecond);

void BM_SymmetrizeAndInduce(benchmark::State& state) {
  Corpus corpus = scenario_corpus(std::size_t(state.range(0)));
  auto embeddings = embed_corpus(corpus, 256, 0);
  auto adjacency = build_knn(embeddings);
  auto incidence = build_incidence(corpus);
  for (auto _ : state) {
    auto s = symmetrize(adjacency);
    auto u = induce(incidence, s);
    benchmark::DoNotOptimize(u.edges.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) *
                          int64_t(corpus.n_users()));
}
BENCHMARK(BM_SymmetrizeAndInduce)->Arg(500)->Arg(2000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
