// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "deltamsg/corpus/filter.hpp"
#include "deltamsg/cpg/cpg.hpp"
#include "deltamsg/delta/delta.hpp"
#include "deltamsg/delta/linearize.hpp"
#include "deltamsg/gen/llm_client.hpp"
#include "deltamsg/gen/prompt.hpp"
#include "deltamsg/gen/shot_index.hpp"
#include "deltamsg/metrics/metrics.hpp"
#include "deltamsg/pipeline/pipeline.hpp"
#include "deltamsg/qa/model.hpp"
#include "mock_llm.hpp"
#include "oracles.hpp"
#include "program_gen.hpp"
#include "qa_synthetic.hpp"

using namespace deltamsg;
using deltamsg::testing::EdgeString;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

cpg::CpgGraph build(const std::string& text) {
  return cpg::build_cpg(cpg::SourceUnit{"Sample.java", text});
}

std::string vertex_id(const cpg::CpgVertex& v) {
  return std::string(cpg::to_string(v.kind)) + "|" + v.code + "|" + v.signature + "|" + std::to_string(v.ordinal);
}

// Library edge sets rendered in the oracle's string form.
std::set<EdgeString> as_strings(const cpg::EdgeSet& edges, const cpg::CpgGraph& a, const cpg::CpgGraph& b) {
  auto lookup = [&](const cpg::VertexKey& k) {
    const cpg::CpgVertex* v = b.find(k);
    if (!v) v = a.find(k);
    return vertex_id(*v);
  };
  std::set<EdgeString> out;
  for (const auto& e : edges) {
    const std::string s = lookup(e.src), d = lookup(e.dst);
    out.insert({s, d, s + " -" + std::string(cpg::to_string(e.type)) + "[" + e.label + "]-> " + d});
  }
  return out;
}

struct VersionPair {
  cpg::CpgGraph old_version, new_version;
};

std::vector<VersionPair> random_pairs(std::size_t n, std::uint64_t seed) {
  testing::ProgramGenerator gen(seed);
  std::vector<VersionPair> out;
  while (out.size() < n) {
    const auto p = gen.program(6);
    const auto q = gen.mutate(p);
    if (testing::render(p) == testing::render(q)) continue;
    out.push_back({build(testing::render(p)), build(testing::render(q))});
  }
  return out;
}

Outcome delta_algebra() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t nonempty = 0;
  for (const auto& [a, b] : random_pairs(200, 101)) {
    const auto common = delta::common_graph(a, b);
    const auto added = delta::added_graph(a, b);
    const auto deleted = delta::deleted_graph(a, b);
    const auto uni = delta::graph_union(a, b);

    cpg::EdgeSet joined = common.edges;
    joined.insert(added.edges.begin(), added.edges.end());
    joined.insert(deleted.edges.begin(), deleted.edges.end());
    o.require(joined == uni.edges, "add/del/common do not cover the union");
    o.require(joined.size() == common.edges.size() + added.edges.size() + deleted.edges.size(),
              "add/del/common overlap");

    const auto oracle = testing::oracle_delta(a, b);
    o.require(as_strings(added.edges, a, b) == oracle.added, "added edges differ from set difference");
    o.require(as_strings(deleted.edges, a, b) == oracle.deleted, "deleted edges differ from set difference");
    o.require(as_strings(common.edges, a, b) == oracle.common, "common edges differ from intersection");

    const auto d = delta::build_delta(a, b);
    o.require(testing::serialized_delta_edges(d, "added") == oracle.added, "delta added != oracle");
    o.require(testing::serialized_delta_edges(d, "deleted") == oracle.deleted, "delta deleted != oracle");
    o.require(testing::serialized_delta_edges(d, "context") == oracle.context, "delta context != oracle");

    std::set<cpg::VertexKey> touched;
    for (const auto* s : {&d.added_edges, &d.deleted_edges}) {
      for (const auto& e : *s) touched.insert({e.src, e.dst});
    }
    for (const auto& e : d.context_edges) {
      o.require(touched.count(e.src) || touched.count(e.dst), "context edge not adjacent to a change");
    }

    o.require(delta::build_delta(a, a).empty() && delta::build_delta(b, b).empty(), "self delta not empty");
    const auto r = delta::build_delta(b, a);
    o.require(r.added_edges == d.deleted_edges && r.deleted_edges == d.added_edges &&
                  r.context_edges == d.context_edges,
              "argument swap does not exchange added/deleted");
    nonempty += !d.empty();
  }
  const double secs = seconds_since(t0);
  o.require(nonempty >= 150, "too few non-empty deltas in the sample");
  o.require(secs < 30.0, "runtime " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "200 pairs (" + std::to_string(nonempty) + " non-empty), " + std::to_string(secs) + " s";
  return o;
}

cpg::CpgVertex ident(const std::string& code, int line) {
  cpg::CpgVertex v;
  v.kind = cpg::VertexKind::Ident;
  v.code = code;
  v.signature = "Chain";
  v.line = line;
  v.key = cpg::VertexKey::make(v.kind, v.code, v.signature, 0);
  return v;
}

Outcome context_rule() {
  Outcome o;
  const auto a = ident("a", 1), b = ident("b", 2), c = ident("c", 3), d = ident("d", 4);
  auto edge = [](const cpg::CpgVertex& s, const cpg::CpgVertex& t, std::string label) {
    return cpg::CpgEdge{s.key, t.key, cpg::EdgeType::Cfg, std::move(label)};
  };
  // a-b is added, removed, or relabelled; b-c and c-d stay.
  for (int variant = 0; variant < 3; ++variant) {
    cpg::CpgGraph g_old, g_new;
    for (auto* g : {&g_old, &g_new}) {
      for (const auto& v : {a, b, c, d}) g->add_vertex(v);
      g->add_edge(edge(b, c, ""));
      g->add_edge(edge(c, d, ""));
    }
    if (variant != 0) g_old.add_edge(edge(a, b, ""));
    if (variant != 1) g_new.add_edge(edge(a, b, variant == 2 ? "true" : ""));
    const auto delta = delta::build_delta(g_old, g_new);
    o.require(delta.context_edges == cpg::EdgeSet{edge(b, c, "")}, "chain context is not exactly {b-c}");
  }

  std::size_t agreed = 0;
  for (const auto& [x, y] : random_pairs(100, 202)) {
    const auto common = delta::common_graph(x, y).edges;
    const auto added = delta::added_graph(x, y).edges;
    const auto deleted = delta::deleted_graph(x, y).edges;
    const auto ctx = delta::restrict_context(common, added, deleted);
    const auto oracle =
        testing::bfs_context(as_strings(common, x, y), as_strings(added, x, y), as_strings(deleted, x, y));
    agreed += as_strings(ctx, x, y) == oracle;
  }
  o.require(agreed == 100, "BFS oracle agreement " + std::to_string(agreed) + "/100");
  if (o.pass) o.detail = "chain {b-c}; BFS agreement 100/100";
  return o;
}

Outcome pdg_oracle() {
  Outcome o;
  testing::ProgramGenerator gen(303);
  std::size_t programs = 0, edges = 0, loops = 0;
  for (; programs < 600; ++programs) {
    const auto p = gen.program(6);
    o.require(testing::count_statements(p.body) <= 6, "generator exceeded 6 statements");
    const auto g = build(testing::render(p));
    const auto got = g.edges_of_type(cpg::EdgeType::PdgData);
    const cpg::EdgeSet lib(got.begin(), got.end());
    const cpg::EdgeSet expect = testing::path_reaching_data_edges(g);
    if (lib != expect) {
      o.require(false, "mismatch on program:\n" + testing::render(p));
      break;
    }
    edges += lib.size();
    loops += testing::render(p).find("while") != std::string::npos;
  }
  if (o.pass) {
    o.detail = std::to_string(programs) + " programs, " + std::to_string(edges) + " data edges, " +
               std::to_string(loops) + " with loops";
  }
  return o;
}

Outcome metrics_checks() {
  Outcome o;
  const auto t0 = Clock::now();
  using metrics::tokenize;
  const auto same = metrics::sentence_report("fix null check in parser", "fix null check in parser");
  o.require(same.rouge_l == 100.0 && same.bleu1 == 100.0, "identical pair is not 100");
  const double r = metrics::rouge_l(tokenize("a b c d"), tokenize("a c b d"));
  o.require(std::abs(r - 75.0) <= 1e-9, "ROUGE-L(a b c d, a c b d) = " + std::to_string(r));
  const double m = metrics::meteor(tokenize("b a"), tokenize("a b"));
  o.require(std::abs(m - 50.0) <= 1e-9, "METEOR(b a, a b) = " + std::to_string(m));

  // Exhaustive LCS: every pair of lists up to length 7 over {a, b}, and up
  // to length 5 over {a, b, c}.
  std::size_t pairs = 0;
  auto all_lists = [](std::size_t alphabet, std::size_t max_len) {
    std::vector<metrics::Tokens> out{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < len; ++i) count *= alphabet;
      for (std::size_t code = 0; code < count; ++code) {
        metrics::Tokens t;
        for (std::size_t i = 0, c = code; i < len; ++i, c /= alphabet) t.push_back(std::string(1, 'a' + c % alphabet));
        out.push_back(std::move(t));
      }
    }
    return out;
  };
  for (auto [alphabet, len] : {std::pair<std::size_t, std::size_t>{2, 7}, {3, 5}}) {
    const auto lists = all_lists(alphabet, len);
    for (const auto& x : lists) {
      for (const auto& y : lists) {
        if (metrics::lcs_length(x, y) != testing::brute_force_lcs(x, y)) {
          o.require(false, "LCS mismatch");
        }
        ++pairs;
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 10.0, "runtime " + std::to_string(secs) + " s");
  if (o.pass) o.detail = std::to_string(pairs) + " LCS pairs, " + std::to_string(secs) + " s";
  return o;
}

// Shared by the numerics and ranking criteria.
struct TrainedModel {
  qa::QaModel model;
  double accuracy = 0;
  double seconds = 0;
};

TrainedModel train_synthetic(std::size_t pairs, int epochs) {
  const auto data = testing::separable_pairs(pairs, 7);
  qa::QaTrainOptions opts;
  opts.seed = 11;
  opts.scorer.epochs = epochs;
  opts.scorer.seed = 11;
  qa::QaTrainReport report;
  const auto t0 = Clock::now();
  TrainedModel t;
  t.model = qa::train_qa_model(data.examples, opts, &report);
  t.seconds = seconds_since(t0);
  t.accuracy = report.scorer.accuracy;
  return t;
}

Outcome qa_numerics(const TrainedModel& trained) {
  Outcome o;
  const auto model = qa::QaModel::init(5);
  const auto data = testing::separable_pairs(10, 99);
  const auto encoded = qa::encode_examples(data.examples, model);
  double worst = 0;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    qa::GradCheckOptions g;
    g.epsilon = 1e-5;
    g.seed = i;
    const auto rep = qa::grad_check(model.scorer, encoded[i], g);
    o.require(rep.finite && rep.checked > 0, "grad_check produced no finite samples");
    worst = std::max(worst, rep.max_relative_error);
  }
  o.require(worst < 1e-4, "grad_check max relative error " + std::to_string(worst));
  o.require(qa::sigmoid(0.0) == 0.5, "sigmoid(0) != 0.5");

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    auto random_matrix = [&](Eigen::Index rows) {
      qa::Matrix m(rows, qa::kGcnHidden);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = u(rng);
      return m;
    };
    const auto code = random_matrix(static_cast<Eigen::Index>(1 + rng() % 8));
    const auto text = random_matrix(static_cast<Eigen::Index>(1 + rng() % 8));
    const double lit = qa::score_encoded(code, text, model.scorer, qa::ScoreMode::PaperLiteral);
    const double sim = qa::score_encoded(code, text, model.scorer, qa::ScoreMode::Similarity);
    o.require(lit >= 0.5 && lit < 1.0, "PAPER_LITERAL score out of range: " + std::to_string(lit));
    o.require(sim > 0.0 && sim <= 0.5, "SIMILARITY score out of range: " + std::to_string(sim));
  }
  o.require(trained.accuracy >= 0.95, "train accuracy " + std::to_string(trained.accuracy));
  o.require(trained.seconds < 60.0, "training took " + std::to_string(trained.seconds) + " s");
  if (o.pass) {
    std::ostringstream s;
    s << "grad max rel err " << worst << "; train acc " << trained.accuracy << " in " << trained.seconds << " s";
    o.detail = s.str();
  }
  return o;
}

// Trials rank deltas the model has not seen, so the model is trained on a
// larger synthetic set for fewer epochs.
Outcome ranking() {
  Outcome o;
  const TrainedModel trained = train_synthetic(1000, 10);
  // Equal texts score equally; the stable sort must keep their input order.
  const auto d = testing::chain_delta({"alpha", "beta", "gamma"});
  std::vector<gen::CandidateMessage> tied;
  for (auto s : {gen::PromptSetting::Zero, gen::PromptSetting::One, gen::PromptSetting::Multi}) {
    tied.push_back({"update alpha", gen::Backend::Llm, s, std::nullopt});
  }
  const auto ranked_ties = qa::rank_candidates(d, tied, trained.model);
  for (std::size_t i = 0; i < tied.size(); ++i) {
    o.require(ranked_ties[i].prompt_setting == tied[i].prompt_setting, "stable order broken for tied scores");
  }

  int wins = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pair = testing::separable_pairs(1, 50'000 + static_cast<std::uint64_t>(trial));
    const auto& delta = pair.examples[0].delta;
    std::vector<gen::CandidateMessage> cands{
        {pair.examples[1].message, gen::Backend::Template, gen::PromptSetting::None, std::nullopt},
        {pair.examples[0].message, gen::Backend::Template, gen::PromptSetting::None, std::nullopt}};
    const auto ranked = qa::rank_candidates(delta, cands, trained.model);
    wins += ranked.front().text == pair.examples[0].message;
  }
  o.require(wins >= 95, "overlapping candidate first in " + std::to_string(wins) + "/100 trials");
  if (o.pass) o.detail = "ties stable; overlap first in " + std::to_string(wins) + "/100 held-out trials";
  return o;
}

Outcome linearization() {
  Outcome o;
  std::size_t truncated = 0;
  for (const auto& [a, b] : random_pairs(100, 404)) {
    const auto d = delta::build_delta(a, b);
    const std::vector<std::size_t> caps{3, 4, 8, 16, 32, 64, 512};
    std::vector<delta::LinearizedChange> outs;
    for (auto k : caps) outs.push_back(delta::linearize(d, k));
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const auto& t = outs[i].tokens;
      o.require(t.size() <= caps[i], "output exceeds cap");
      for (std::size_t j = 1; j < t.size(); ++j) {
        o.require(static_cast<int>(t[j - 1].marker) <= static_cast<int>(t[j].marker), "marker order broken");
      }
      for (std::size_t j = i + 1; j < caps.size(); ++j) {
        const auto& longer = outs[j].tokens;
        o.require(t.size() <= longer.size() && std::equal(t.begin(), t.end(), longer.begin()),
                  "cap " + std::to_string(caps[i]) + " is not a prefix of cap " + std::to_string(caps[j]));
      }
    }
    truncated += outs[0].truncated;
  }
  if (o.pass) o.detail = "100 deltas, " + std::to_string(truncated) + " truncated at cap 3";
  return o;
}

Outcome end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto corpus = corpus::load_corpus(std::string(DELTAMSG_TEST_DATA_DIR) + "/mini_corpus.jsonl");
  auto run = [&](std::size_t workers) {
    pipeline::RunConfig cfg;
    cfg.workers = workers;
    std::string out;
    pipeline::run_pipeline(cfg, corpus, [&](const pipeline::CommitResult& r) { out += r.to_json() + "\n"; });
    return out;
  };
  const auto first = run(1), second = run(1), parallel = run(4);
  o.require(std::count(first.begin(), first.end(), '\n') == 20, "expected 20 result lines");
  o.require(first == second, "two runs differ");
  o.require(first == parallel, "workers 1 and 4 differ");
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "runtime " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "byte-identical over 3 runs, " + std::to_string(secs) + " s";
  return o;
}

Outcome prompt_contracts() {
  Outcome o;
  corpus::Corpus c;
  std::mt19937_64 rng(77);
  const std::vector<std::string> words{"count", "limit", "graph", "node", "edge", "cache", "parse", "token",
                                       "index", "queue", "value", "buffer", "flush", "reset", "length"};
  for (int i = 0; i < 20; ++i) {
    corpus::CommitRecord r;
    r.repo = "mock/repo" + std::to_string(i % 3);
    r.sha = std::string(40, static_cast<char>('a' + i % 6)) + std::to_string(i);
    r.path = "A.java";
    std::string diff = "--- a/A.java\n+++ b/A.java\n";
    for (int l = 0; l < 4; ++l) diff += std::string(l % 2 ? "-" : "+") + "  " + words[rng() % words.size()] + " = " + words[rng() % words.size()] + ";\n";
    r.diff_text = diff;
    r.message = "update " + words[rng() % words.size()];
    c.records.push_back(r);
  }
  const auto index = gen::build_shot_index(c);

  std::vector<std::string> docs;
  for (const auto& r : c.records) docs.push_back(r.diff_text);
  for (int q = 0; q < 20; ++q) {
    const std::string query = c.records[q].diff_text + "+ " + words[q % words.size()] + " extra;\n";
    const auto got = gen::retrieve_shots(index, query, 20);
    const auto cos = testing::brute_force_cosines(docs, query);
    std::vector<std::size_t> order(20);
    for (std::size_t i = 0; i < 20; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (std::abs(cos[x] - cos[y]) > 1e-12) return cos[x] > cos[y];
      return std::tie(c.records[x].repo, c.records[x].sha) < std::tie(c.records[y].repo, c.records[y].sha);
    });
    o.require(got.size() == 20, "retrieval returned wrong count");
    for (std::size_t i = 0; i < got.size(); ++i) {
      o.require(got[i].sha == c.records[order[i]].sha, "retrieval order differs from brute force");
      o.require(std::abs(got[i].similarity - cos[order[i]]) < 1e-9, "similarity differs from brute force");
    }
  }

  // The mock echoes back messy multi-line text with more than 80 tokens.
  std::string long_line;
  for (int i = 0; i < 120; ++i) long_line += " w" + std::to_string(i);
  testing::MockLlm mock([&](const nlohmann::json&, int call) {
    return testing::MockLlm::text("\n   \n" + std::string(call % 2 ? "  fix   the" : "update") + long_line +
                                  "\nsecond line\n");
  });
  const auto cfg = mock.config();
  std::size_t responses = 0;
  for (std::size_t k : {0, 1, 3}) {
    const auto shots = gen::retrieve_shots(index, c.records[0].diff_text, k, gen::RecordId{c.records[0].repo, c.records[0].sha});
    const auto spec = gen::make_prompt_spec(shots, k);
    const std::string prompt = gen::build_prompt(spec, c.records[0].diff_text);
    const auto before = mock.requests().size();
    const auto cands = gen::llm_generate(prompt, cfg, 4, spec.setting);
    const auto reqs = mock.requests();
    for (std::size_t i = before; i < reqs.size(); ++i) {
      const auto sent = reqs[i].at("messages").at(0).at("content").get<std::string>();
      o.require(gen::count_shot_blocks(sent) == k, "prompt holds wrong number of shot blocks for k=" + std::to_string(k));
    }
    for (const auto& m : cands) {
      std::istringstream words_in(m.text);
      std::vector<std::string> toks{std::istream_iterator<std::string>(words_in), {}};
      o.require(toks.size() == 80, "candidate not capped at 80 tokens");
      o.require(m.text.find('\n') == std::string::npos, "candidate spans lines");
      o.require(toks.front() == "update" || (toks.front() == "fix" && toks[1] == "the"), "not the first non-blank line");
      ++responses;
    }
  }
  o.require(responses == 12, "expected 12 mock responses");
  if (o.pass) o.detail = "0/1/3 shot blocks; retrieval = brute force on 20 queries; " + std::to_string(responses) + " replies clamped";
  return o;
}

Outcome corpus_rules() {
  Outcome o;
  using corpus::Rule;
  auto reasons = [](const std::string& m) { return corpus::filter_message(m).reasons; };
  std::string long_msg = "update";
  for (int i = 0; i < 30; ++i) long_msg += " x";
  const std::vector<std::pair<std::string, std::vector<Rule>>> cases{
      {"Merge branch 'master'", {Rule::MergeRevert}},
      {"fix npe in lock graph when roots empty", {}},
      {"add missing check", {}},
      {"wip", {Rule::TooShort, Rule::NonVerbStart}},
      {long_msg, {Rule::TooLong}},
      {"Revert previous cache change", {Rule::MergeRevert}},
      {"bump lodash version [bot]", {Rule::Bot}},
      {"(#1234)", {Rule::TooShort, Rule::Bot, Rule::NonVerbStart}},
      {"refactored the parser code", {Rule::NonVerbStart}},
      {"fix \xe4\xbf\xae\xe5\xa4\x8d\xe9\x94\x99\xe8\xaf\xaf\xe9\x97\xae\xe9\xa2\x98 \xe4\xbb\xa3\xe7\xa0\x81", {Rule::NonAsciiMajority}},
  };
  for (const auto& [msg, expect] : cases) o.require(reasons(msg) == expect, "wrong verdict for \"" + msg + "\"");

  corpus::CommitRecord rec;
  rec.path = "A.py";
  rec.old_text = "class A {}";
  rec.new_text = "class A {}";
  o.require(corpus::filter_commit(rec).reasons == std::vector<Rule>{Rule::JavaOnly}, "JAVA_ONLY example");
  rec.path = "A.java";
  o.require(corpus::filter_commit(rec).accepted(), "parseable java rejected");
  rec.new_text = "class A { void f( }";
  o.require(corpus::filter_commit(rec).reasons == std::vector<Rule>{Rule::ParseFail}, "PARSE_FAIL example");

  corpus::Corpus c;
  for (int i = 0; i < 50; ++i) c.records.push_back({"r" + std::to_string(i % 7), "sha" + std::to_string(i), "A.java", "", "", "", "", ""});
  const auto sizes = corpus::split_sizes(50, {});
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s1 = corpus::split_corpus(c, {}, seed);
    const auto s2 = corpus::split_corpus(c, {}, seed);
    o.require(s1.split == s2.split && s1.records == s2.records, "split not deterministic for seed " + std::to_string(seed));
    o.require(s1.split.size() == 50, "split not exhaustive");
    std::set<std::string> seen;
    bool disjoint = true;
    for (auto sp : {corpus::Split::Train, corpus::Split::Valid, corpus::Split::Test}) {
      for (const auto* r : s1.in_split(sp)) disjoint = seen.insert(r->sha).second && disjoint;
    }
    o.require(disjoint && seen.size() == 50, "splits overlap or miss records");
    o.require(s1.in_split(corpus::Split::Train).size() == sizes[0] && s1.in_split(corpus::Split::Valid).size() == sizes[1],
              "split sizes off");
  }
  if (o.pass) o.detail = std::to_string(cases.size()) + " message cases, 3 file cases, 1000 seeds";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report("delta-algebra", delta_algebra);
  report("context-rule", context_rule);
  report("pdg-oracle", pdg_oracle);
  report("metrics", metrics_checks);
  TrainedModel trained;
  bool trained_ok = true;
  try {
    trained = train_synthetic(20, 200);
  } catch (const std::exception& e) {
    trained_ok = false;
    std::printf("synthetic training failed: %s\n", e.what());
  }
  report("qa-numerics", [&] {
    Outcome o = qa_numerics(trained);
    o.require(trained_ok, "synthetic training threw");
    return o;
  });
  report("ranking", ranking);
  report("linearization", linearization);
  report("end-to-end-determinism", end_to_end);
  report("prompt-contracts", prompt_contracts);
  report("corpus-rules", corpus_rules);
  return failures == 0 ? 0 : 1;
}
