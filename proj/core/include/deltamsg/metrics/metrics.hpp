#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace deltamsg::metrics {

using Tokens = std::vector<std::string>;

// Shared tokenizer for every metric: splits on whitespace, then separates
// each ASCII punctuation character into its own token; ASCII letters are
// lowercased. Bytes >= 0x80 are treated as word characters.
Tokens tokenize(std::string_view text);

// Sentence BLEU (x100) for n = 1..max_n. Every n-gram precision is smoothed
// as (matches + 1) / (candidate n-grams + 1), matches clipped by reference
// counts; brevity penalty exp(1 - r/c) when c < r. An empty candidate scores
// 0. Throws EmptyReference.
std::vector<double> bleu_norm(const Tokens& candidate, const Tokens& reference,
                              std::size_t max_n = 4);

std::size_t lcs_length(const Tokens& a, const Tokens& b);

// ROUGE-L F1 over the longest common subsequence (x100). Throws
// EmptyReference.
double rouge_l(const Tokens& candidate, const Tokens& reference);

struct Alignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  // False only if the search budget ran out before optimality was proven.
  bool exact = true;
};

// Exact-match unigram alignment with the most matches, and among those the
// fewest chunks (maximal runs contiguous in both texts).
Alignment meteor_alignment(const Tokens& candidate, const Tokens& reference);

// METEOR, exact-match module only (x100):
//   P = m/|cand|, R = m/|ref|, F = 10PR / (R + 9P),
//   penalty = 0.5 (chunks/m)^3, score = F (1 - penalty); 0 when m = 0.
// Throws EmptyReference.
double meteor(const Tokens& candidate, const Tokens& reference);

struct MetricReport {
  double bleu1 = 0, bleu2 = 0, bleu3 = 0, bleu4 = 0;
  double meteor = 0;
  double rouge_l = 0;
  std::size_t n = 0;

  std::string to_json() const;
};

struct TextPair {
  std::string candidate;
  std::string reference;
};

MetricReport sentence_report(std::string_view candidate, std::string_view reference);

// Arithmetic mean of sentence scores, summed in input order. Throws
// EmptyCorpus when `pairs` is empty.
MetricReport corpus_report(std::span<const TextPair> pairs);

}  // namespace deltamsg::metrics
