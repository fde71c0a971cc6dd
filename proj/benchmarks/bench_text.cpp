#include <benchmark/benchmark.h>

#include <random>

#include "deltamsg/gen/shot_index.hpp"
#include "deltamsg/metrics/metrics.hpp"

using namespace deltamsg;

namespace {

std::string random_sentence(std::mt19937_64& rng, int words, int vocab) {
  std::string s;
  for (int i = 0; i < words; ++i) s += (i ? " w" : "w") + std::to_string(rng() % vocab);
  return s;
}

}  // namespace

static void BM_Meteor(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int len = static_cast<int>(state.range(0));
  const auto c = metrics::tokenize(random_sentence(rng, len, 6));
  const auto r = metrics::tokenize(random_sentence(rng, len, 6));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::meteor(c, r));
}
BENCHMARK(BM_Meteor)->Arg(8)->Arg(16)->Arg(32);

static void BM_CorpusReport(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<metrics::TextPair> pairs;
  for (int i = 0; i < 1000; ++i) pairs.push_back({random_sentence(rng, 10, 50), random_sentence(rng, 12, 50)});
  for (auto _ : state) benchmark::DoNotOptimize(metrics::corpus_report(pairs));
}
BENCHMARK(BM_CorpusReport)->Unit(benchmark::kMillisecond);

static void BM_RetrieveShots(benchmark::State& state) {
  std::mt19937_64 rng(3);
  corpus::Corpus c;
  for (int i = 0; i < state.range(0); ++i) {
    corpus::CommitRecord r;
    r.repo = "bench";
    r.sha = std::to_string(i);
    r.diff_text = "+ " + random_sentence(rng, 30, 2000) + "\n- " + random_sentence(rng, 30, 2000);
    r.message = "update";
    c.records.push_back(std::move(r));
  }
  const auto index = gen::build_shot_index(c);
  const std::string query = "+ " + random_sentence(rng, 30, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(gen::retrieve_shots(index, query, 5));
}
BENCHMARK(BM_RetrieveShots)->Arg(1000)->Arg(10000);
