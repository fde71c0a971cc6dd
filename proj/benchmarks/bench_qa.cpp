#include <benchmark/benchmark.h>

#include "deltamsg/qa/model.hpp"
#include "qa_synthetic.hpp"

using namespace deltamsg;
using namespace deltamsg::qa;

static void BM_ScorerForward(benchmark::State& state) {
  const auto p = ScorerParams::init(1);
  const Matrix seq = seeded_uniform(state.range(0), kGcnHidden, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(scorer_forward(seq, p));
}
BENCHMARK(BM_ScorerForward)->Arg(8)->Arg(64)->Arg(256);

static void BM_PairBackward(benchmark::State& state) {
  const auto p = ScorerParams::init(1);
  const Matrix code = seeded_uniform(32, kGcnHidden, 1.0, 3);
  const Matrix text = seeded_uniform(8, kGcnHidden, 1.0, 4);
  for (auto _ : state) {
    auto grads = zero_grads(p);
    benchmark::DoNotOptimize(pair_forward(code, text, 1, p, &grads));
  }
}
BENCHMARK(BM_PairBackward);

static void BM_ScorePair(benchmark::State& state) {
  const auto model = QaModel::init(1);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i) words.push_back(testing::synthetic_word(i));
  const auto d = testing::chain_delta(words);
  for (auto _ : state) benchmark::DoNotOptimize(score_pair(d, "update node0 edge0", model));
}
BENCHMARK(BM_ScorePair)->Arg(8)->Arg(64);

BENCHMARK_MAIN();
