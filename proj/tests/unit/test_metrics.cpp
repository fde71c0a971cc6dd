#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "deltamsg/errors.hpp"
#include "deltamsg/metrics/metrics.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace deltamsg;
using namespace deltamsg::metrics;
namespace dt = deltamsg::testing;

TEST(Tokenize, SplitsPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("Fix NPE in LockGraph.create()"),
            (Tokens{"fix", "npe", "in", "lockgraph", ".", "create", "(", ")"}));
  EXPECT_EQ(tokenize("  a\tb\n"), (Tokens{"a", "b"}));
  EXPECT_EQ(tokenize("\xc3\xa9t\xc3\xa9"), (Tokens{"\xc3\xa9t\xc3\xa9"}));
  EXPECT_TRUE(tokenize("").empty());
}

TEST(Bleu, ExactMatch) {
  const auto s = bleu_norm(tokenize("fix null pointer"), tokenize("fix null pointer"));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s[0], 100.0);
  EXPECT_DOUBLE_EQ(s[1], 100.0);
  EXPECT_DOUBLE_EQ(s[2], 100.0);
  // The absent 4-gram is smoothed to (0 + 1) / (0 + 1).
  EXPECT_DOUBLE_EQ(s[3], 100.0);
}

TEST(Bleu, BrevityPenalty) {
  const auto s = bleu_norm(tokenize("fix null pointer"), tokenize("fix null pointer bug"));
  EXPECT_NEAR(s[0], 100.0 * std::exp(1.0 - 4.0 / 3.0), 1e-12);
}

TEST(Bleu, ZeroOverlapIsSmoothed) {
  const auto s = bleu_norm(tokenize("a b"), tokenize("c d e"));
  EXPECT_NEAR(s[0], 100.0 * std::exp(1.0 - 3.0 / 2.0) / 3.0, 1e-12);
  EXPECT_GT(s[0], 0.0);
}

TEST(Bleu, EmptyInputs) {
  EXPECT_EQ(bleu_norm({}, tokenize("a"))[0], 0.0);
  EXPECT_THROW(bleu_norm(tokenize("a"), {}), EmptyReference);
}

TEST(RougeL, Examples) {
  EXPECT_DOUBLE_EQ(rouge_l(tokenize("a b c"), tokenize("a b c")), 100.0);
  EXPECT_NEAR(rouge_l(tokenize("a b c d"), tokenize("a c b d")), 75.0, 1e-9);
  EXPECT_EQ(rouge_l(tokenize("x y"), tokenize("a b")), 0.0);
  EXPECT_THROW(rouge_l(tokenize("a"), {}), EmptyReference);
}

TEST(RougeL, LcsMatchesBruteForce) {
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    Tokens a, b;
    for (int k = static_cast<int>(rng() % 9); k > 0; --k) a.push_back(std::string(1, 'a' + rng() % 4));
    for (int k = static_cast<int>(rng() % 9); k > 0; --k) b.push_back(std::string(1, 'a' + rng() % 4));
    EXPECT_EQ(lcs_length(a, b), dt::brute_force_lcs(a, b));
  }
}

TEST(Meteor, Examples) {
  EXPECT_EQ(meteor(tokenize("x"), tokenize("a b")), 0.0);
  EXPECT_NEAR(meteor(tokenize("a b"), tokenize("a b")), 93.75, 1e-9);
  EXPECT_NEAR(meteor(tokenize("b a"), tokenize("a b")), 50.0, 1e-9);
  const auto al = meteor_alignment(tokenize("b a"), tokenize("a b"));
  EXPECT_EQ(al.matches, 2u);
  EXPECT_EQ(al.chunks, 2u);
  EXPECT_TRUE(al.exact);
}

TEST(Meteor, PrefersContiguousAlignment) {
  // "a" occurs twice in the reference; aligning to the second keeps one chunk.
  const auto al = meteor_alignment(tokenize("a b"), tokenize("a x a b"));
  EXPECT_EQ(al.matches, 2u);
  EXPECT_EQ(al.chunks, 1u);
}

TEST(Meteor, MatchesExhaustiveAlignment) {
  std::mt19937 rng(11);
  for (int i = 0; i < 1500; ++i) {
    Tokens a, b;
    for (int k = 1 + static_cast<int>(rng() % 7); k > 0; --k) a.push_back(std::string(1, 'a' + rng() % 3));
    for (int k = 1 + static_cast<int>(rng() % 7); k > 0; --k) b.push_back(std::string(1, 'a' + rng() % 3));
    const auto got = meteor_alignment(a, b);
    const auto want = dt::brute_force_alignment(a, b);
    EXPECT_EQ(got.matches, want.matches);
    EXPECT_EQ(got.chunks, want.chunks);
    EXPECT_NEAR(meteor(a, b), dt::reference_meteor(a, b), 1e-9);
  }
}

TEST(Report, SentenceAndCorpus) {
  const auto one = sentence_report("fix the bug", "fix the bug");
  const std::vector<TextPair> single{{"fix the bug", "fix the bug"}};
  const auto c1 = corpus_report(single);
  EXPECT_EQ(c1.rouge_l, one.rouge_l);
  EXPECT_EQ(c1.n, 1u);

  const std::vector<TextPair> two{{"a b", "a b"}, {"x", "a b"}};
  EXPECT_NEAR(corpus_report(two).rouge_l, 50.0, 1e-12);
  EXPECT_THROW(corpus_report(std::vector<TextPair>{}), EmptyCorpus);
}

TEST(Report, MeanOfRandomPairs) {
  std::mt19937 rng(5);
  std::vector<TextPair> pairs;
  for (int i = 0; i < 10; ++i) {
    std::string c, r;
    for (int k = 0; k < 5; ++k) c += std::string(1, 'a' + rng() % 5) + " ";
    for (int k = 0; k < 6; ++k) r += std::string(1, 'a' + rng() % 5) + " ";
    pairs.push_back({c, r});
  }
  double bleu4 = 0, met = 0, rl = 0;
  for (const auto& p : pairs) {
    const auto s = sentence_report(p.candidate, p.reference);
    bleu4 += s.bleu4;
    met += s.meteor;
    rl += s.rouge_l;
  }
  const auto rep = corpus_report(pairs);
  EXPECT_NEAR(rep.bleu4, bleu4 / 10, 1e-12);
  EXPECT_NEAR(rep.meteor, met / 10, 1e-12);
  EXPECT_NEAR(rep.rouge_l, rl / 10, 1e-12);
}

TEST(Report, JsonKeys) {
  const auto j = nlohmann::json::parse(sentence_report("a", "a").to_json());
  for (const char* k : {"bleu1", "bleu2", "bleu3", "bleu4", "meteor", "rouge_l", "n"}) EXPECT_TRUE(j.contains(k)) << k;
}
