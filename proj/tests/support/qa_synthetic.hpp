#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "deltamsg/delta/delta.hpp"
#include "deltamsg/qa/model.hpp"

namespace deltamsg::testing {

// Words shaped like identifiers, unique per index.
inline std::string synthetic_word(std::size_t i) {
  static const char* stems[] = {"node", "edge", "graph", "cache", "token", "parser", "buffer", "index",
                                "queue", "stack", "table", "record", "field", "value", "count", "limit"};
  return std::string(stems[i % 16]) + std::to_string(i / 16);
}

// A delta whose added chain A-B-C... uses the given identifier codes.
inline delta::DeltaGraph chain_delta(const std::vector<std::string>& codes, const std::string& sig = "C.m()") {
  delta::DeltaGraph d;
  std::vector<cpg::VertexKey> keys;
  int line = 1;
  for (const auto& c : codes) {
    cpg::CpgVertex v;
    v.kind = cpg::VertexKind::Ident;
    v.code = c;
    v.signature = sig;
    v.line = line++;
    v.ordinal = 0;
    v.key = cpg::VertexKey::make(v.kind, v.code, v.signature, v.ordinal);
    keys.push_back(v.key);
    d.added_vertices.emplace(v.key, v);
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    d.added_edges.insert(cpg::CpgEdge{keys[i], keys[i + 1], cpg::EdgeType::Ast, ""});
  }
  return d;
}

struct SyntheticPairs {
  std::vector<qa::TrainExample> examples;
  // Parallel to examples: the delta's own words and a disjoint word set.
  std::vector<std::vector<std::string>> own_words, other_words;
};

// Positive pairs mention words of their delta. Negatives draw from the other
// half of the vocabulary, or with `shared_vocabulary` from any word the delta
// does not use.
inline SyntheticPairs separable_pairs(std::size_t pairs, std::uint64_t seed, std::size_t words_per_delta = 4,
                                      bool shared_vocabulary = false) {
  std::mt19937_64 gen(seed);
  SyntheticPairs out;
  const std::size_t vocab = 256;
  for (std::size_t i = 0; i < pairs; ++i) {
    std::vector<std::string> own, other;
    for (std::size_t k = 0; k < words_per_delta; ++k) own.push_back(synthetic_word(gen() % (vocab / 2)));
    while (other.size() < words_per_delta) {
      const std::string w = shared_vocabulary ? synthetic_word(gen() % (vocab / 2))
                                              : synthetic_word(vocab / 2 + gen() % (vocab / 2));
      if (std::find(own.begin(), own.end(), w) == own.end()) other.push_back(w);
    }
    const auto d = chain_delta(own);
    std::string pos = "update", neg = "update";
    for (std::size_t k = 0; k + 1 < words_per_delta; ++k) {
      pos += " " + own[k];
      neg += " " + other[k];
    }
    out.examples.push_back({d, pos, 1});
    out.examples.push_back({d, neg, 0});
    out.own_words.push_back(own);
    out.own_words.push_back(own);
    out.other_words.push_back(other);
    out.other_words.push_back(other);
  }
  return out;
}

}  // namespace deltamsg::testing
