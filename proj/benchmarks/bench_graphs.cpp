#include <benchmark/benchmark.h>

#include "deltamsg/cpg/cpg.hpp"
#include "deltamsg/delta/delta.hpp"
#include "deltamsg/delta/linearize.hpp"
#include "deltamsg/pipeline/pipeline.hpp"
#include "program_gen.hpp"

using namespace deltamsg;

namespace {

struct VersionPair {
  std::string old_text, new_text;
};

VersionPair make_pair(int statements, std::uint64_t seed) {
  testing::ProgramGenerator gen(seed);
  auto p = gen.program(statements);
  while (testing::count_statements(p.body) < statements / 2) p = gen.program(statements);
  return {testing::render(p), testing::render(gen.mutate(p))};
}

}  // namespace

static void BM_BuildCpg(benchmark::State& state) {
  const auto src = make_pair(static_cast<int>(state.range(0)), 1).old_text;
  for (auto _ : state) benchmark::DoNotOptimize(cpg::build_cpg({"Sample.java", src}));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_BuildCpg)->Arg(8)->Arg(32)->Arg(128);

static void BM_BuildDelta(benchmark::State& state) {
  const auto v = make_pair(static_cast<int>(state.range(0)), 2);
  const auto a = cpg::build_cpg({"Sample.java", v.old_text});
  const auto b = cpg::build_cpg({"Sample.java", v.new_text});
  for (auto _ : state) benchmark::DoNotOptimize(delta::build_delta(a, b));
  state.counters["edges"] = static_cast<double>(a.edges().size() + b.edges().size());
}
BENCHMARK(BM_BuildDelta)->Arg(8)->Arg(32)->Arg(128);

static void BM_Linearize(benchmark::State& state) {
  const auto v = make_pair(64, 3);
  const auto d = delta::build_delta(cpg::build_cpg({"A.java", v.old_text}), cpg::build_cpg({"A.java", v.new_text}));
  for (auto _ : state) benchmark::DoNotOptimize(delta::linearize(d, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Linearize)->Arg(64)->Arg(512);

static void BM_MiniCorpusRun(benchmark::State& state) {
  const auto corpus = corpus::load_corpus(std::string(DELTAMSG_BENCH_DATA_DIR) + "/mini_corpus.jsonl");
  pipeline::RunConfig cfg;
  cfg.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    std::size_t n = 0;
    pipeline::run_pipeline(cfg, corpus, [&](const pipeline::CommitResult&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_MiniCorpusRun)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
