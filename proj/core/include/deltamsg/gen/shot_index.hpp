#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deltamsg/corpus/corpus.hpp"

namespace deltamsg::gen {

// (term id, weight), sorted by term id.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

double dot(const SparseVector& a, const SparseVector& b);
double l2_norm(const SparseVector& v);

// Maximal runs of [A-Za-z0-9_] plus any byte >= 0x80.
std::vector<std::string> diff_tokens(std::string_view diff);

class DiffEmbedder {
 public:
  virtual ~DiffEmbedder() = default;
  // Unit-length vector, or the zero vector for a diff without tokens.
  virtual SparseVector embed(std::string_view diff) const = 0;
};

// tf * idf with idf(t) = ln((1 + N) / (1 + df(t))) + 1, fitted on a fixed
// document set. Terms unseen at fit time still count toward the norm of a
// query but never match a document.
class TfIdfEmbedder final : public DiffEmbedder {
 public:
  explicit TfIdfEmbedder(std::span<const std::string> documents);
  SparseVector embed(std::string_view diff) const override;
  std::size_t vocabulary_size() const noexcept { return idf_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<double> idf_;
  double unseen_idf_ = 1.0;
};

struct Shot {
  std::string repo;
  std::string sha;
  std::string diff;
  std::string message;
  double similarity = 0.0;
};

struct ShotEntry {
  std::string repo;
  std::string sha;
  std::string diff;
  std::string message;
  SparseVector vector;
};

struct ShotIndex {
  std::shared_ptr<const DiffEmbedder> embedder;
  std::vector<ShotEntry> entries;
};

// Indexes the train split (records marked Train, or all records when the
// corpus has not been split). Throws EmptyCorpus.
ShotIndex build_shot_index(const corpus::Corpus& corpus);
ShotIndex build_shot_index(std::span<const corpus::CommitRecord* const> records,
                           std::shared_ptr<const DiffEmbedder> embedder = nullptr);

struct RecordId {
  std::string repo;
  std::string sha;
};

// Top-k entries by cosine to the query, ties by (repo, sha); `exclude` drops
// the query's own record. k larger than the index returns everything.
std::vector<Shot> retrieve_shots(const ShotIndex& index, std::string_view query_diff, std::size_t k,
                                 const std::optional<RecordId>& exclude = std::nullopt);

}  // namespace deltamsg::gen
