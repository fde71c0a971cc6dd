#include "deltamsg/gen/shot_index.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "deltamsg/errors.hpp"

namespace deltamsg::gen {

double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

double l2_norm(const SparseVector& v) {
  double s = 0.0;
  for (const auto& [id, w] : v) s += w * w;
  return std::sqrt(s);
}

std::vector<std::string> diff_tokens(std::string_view diff) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : diff) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c) || c == '_') {
      cur.push_back(ch);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

TfIdfEmbedder::TfIdfEmbedder(std::span<const std::string> documents) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    const auto toks = diff_tokens(doc);
    for (const auto& t : std::set<std::string>(toks.begin(), toks.end())) ++df[t];
  }
  const double n = static_cast<double>(documents.size());
  idf_.reserve(df.size());
  for (const auto& [term, count] : df) {
    vocab_.emplace(term, static_cast<std::uint32_t>(idf_.size()));
    idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  unseen_idf_ = std::log(1.0 + n) + 1.0;
}

SparseVector TfIdfEmbedder::embed(std::string_view diff) const {
  std::map<std::uint32_t, double> tf;
  std::map<std::string, double> unseen;
  for (auto& t : diff_tokens(diff)) {
    auto it = vocab_.find(t);
    if (it == vocab_.end()) {
      unseen[std::move(t)] += 1.0;
    } else {
      tf[it->second] += 1.0;
    }
  }
  SparseVector v;
  v.reserve(tf.size());
  double norm2 = 0.0;
  for (const auto& [id, f] : tf) {
    const double w = f * idf_[id];
    v.emplace_back(id, w);
    norm2 += w * w;
  }
  for (const auto& [t, f] : unseen) norm2 += (f * unseen_idf_) * (f * unseen_idf_);
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& [id, w] : v) w *= inv;
  }
  return v;
}

ShotIndex build_shot_index(std::span<const corpus::CommitRecord* const> records,
                           std::shared_ptr<const DiffEmbedder> embedder) {
  if (records.empty()) throw EmptyCorpus("no training records to index");
  if (!embedder) {
    std::vector<std::string> docs;
    docs.reserve(records.size());
    for (const auto* r : records) docs.push_back(r->diff_text);
    embedder = std::make_shared<TfIdfEmbedder>(docs);
  }
  ShotIndex index;
  index.embedder = embedder;
  index.entries.reserve(records.size());
  for (const auto* r : records) {
    index.entries.push_back({r->repo, r->sha, r->diff_text, r->message, embedder->embed(r->diff_text)});
  }
  return index;
}

ShotIndex build_shot_index(const corpus::Corpus& corpus) {
  std::vector<const corpus::CommitRecord*> train;
  if (corpus.split.empty()) {
    for (const auto& r : corpus.records) train.push_back(&r);
  } else {
    train = corpus.in_split(corpus::Split::Train);
  }
  return build_shot_index(std::span<const corpus::CommitRecord* const>(train));
}

std::vector<Shot> retrieve_shots(const ShotIndex& index, std::string_view query_diff, std::size_t k,
                                 const std::optional<RecordId>& exclude) {
  const SparseVector q = index.embedder->embed(query_diff);
  std::vector<Shot> scored;
  scored.reserve(index.entries.size());
  for (const auto& e : index.entries) {
    if (exclude && e.repo == exclude->repo && e.sha == exclude->sha) continue;
    scored.push_back({e.repo, e.sha, e.diff, e.message, dot(q, e.vector)});
  }
  std::sort(scored.begin(), scored.end(), [](const Shot& a, const Shot& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return std::tie(a.repo, a.sha) < std::tie(b.repo, b.sha);
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace deltamsg::gen
