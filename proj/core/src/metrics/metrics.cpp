#include "deltamsg/metrics/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "deltamsg/errors.hpp"
#include "json.hpp"

namespace deltamsg::metrics {

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      word.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  flush();
  return out;
}

namespace {

void require_reference(const Tokens& reference) {
  if (reference.empty()) throw EmptyReference("reference has no tokens");
}

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const Tokens& t, std::size_t n) {
  NgramCounts out;
  if (t.size() < n) return out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    ++out[std::vector<std::string>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                   t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

}  // namespace

std::vector<double> bleu_norm(const Tokens& candidate, const Tokens& reference,
                              std::size_t max_n) {
  require_reference(reference);
  std::vector<double> scores(max_n, 0.0);
  if (candidate.empty()) return scores;
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    NgramCounts cand = ngrams(candidate, n);
    NgramCounts ref = ngrams(reference, n);
    std::size_t total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
    std::size_t matched = 0;
    for (const auto& [gram, count] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    log_sum += std::log((static_cast<double>(matched) + 1.0) / (static_cast<double>(total) + 1.0));
    scores[n - 1] = 100.0 * bp * std::exp(log_sum / static_cast<double>(n));
  }
  return scores;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const Tokens& candidate, const Tokens& reference) {
  require_reference(reference);
  const std::size_t l = lcs_length(candidate, reference);
  if (l == 0) return 0.0;
  const double p = static_cast<double>(l) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(l) / static_cast<double>(reference.size());
  return 100.0 * 2.0 * p * r / (p + r);
}

namespace {

// Depth-first branch and bound over candidate positions. Chunks equal
// matches minus "links" (candidate i -> ref j followed by i+1 -> j+1), so the
// search maximizes links among maximum-match alignments.
class AlignmentSearch {
 public:
  AlignmentSearch(const Tokens& cand, const Tokens& ref) : cand_(cand), ref_(ref) {
    std::map<std::string, int> ids;
    auto id = [&](const std::string& s) {
      return ids.emplace(s, static_cast<int>(ids.size())).first->second;
    };
    for (const auto& t : cand) cand_ids_.push_back(id(t));
    for (const auto& t : ref) ref_ids_.push_back(id(t));
    const std::size_t types = ids.size();
    std::vector<int> cc(types, 0), rc(types, 0);
    for (int t : cand_ids_) ++cc[t];
    for (int t : ref_ids_) ++rc[t];
    need_.resize(types);
    for (std::size_t t = 0; t < types; ++t) {
      need_[t] = std::min(cc[t], rc[t]);
      matches_ += static_cast<std::size_t>(need_[t]);
    }
    remaining_in_cand_ = cc;
    positions_.resize(types);
    for (std::size_t j = 0; j < ref.size(); ++j) positions_[ref_ids_[j]].push_back(j);
    used_.assign(ref.size(), false);
  }

  Alignment run() {
    Alignment a;
    a.matches = matches_;
    if (matches_ == 0) return a;
    need_left_total_ = matches_;
    dfs(0, -1, 0);
    a.chunks = matches_ - static_cast<std::size_t>(best_links_);
    a.exact = budget_ > 0;
    return a;
  }

 private:
  void dfs(std::size_t i, long prev_j, int links) {
    if (budget_ == 0) return;
    --budget_;
    if (i == cand_.size() || need_left_total_ == 0) {
      best_links_ = std::max(best_links_, links);
      return;
    }
    // Each further match can add at most one link.
    if (links + static_cast<int>(std::min(cand_.size() - i, need_left_total_)) <= best_links_) {
      return;
    }
    const int t = cand_ids_[i];
    --remaining_in_cand_[t];
    if (need_[t] > 0) {
      auto try_j = [&](std::size_t j) {
        used_[j] = true;
        --need_[t];
        --need_left_total_;
        dfs(i + 1, static_cast<long>(j), links + (prev_j >= 0 && static_cast<long>(j) == prev_j + 1));
        ++need_left_total_;
        ++need_[t];
        used_[j] = false;
      };
      const long adjacent = prev_j >= 0 ? prev_j + 1 : -1;
      if (adjacent >= 0 && static_cast<std::size_t>(adjacent) < ref_.size() &&
          ref_ids_[adjacent] == t && !used_[adjacent]) {
        try_j(static_cast<std::size_t>(adjacent));
      }
      for (std::size_t j : positions_[t]) {
        if (!used_[j] && static_cast<long>(j) != adjacent) try_j(j);
      }
    }
    // Leaving position i unaligned is allowed only if the remaining
    // occurrences can still reach the maximum match count.
    if (remaining_in_cand_[t] >= need_[t]) dfs(i + 1, -1, links);
    ++remaining_in_cand_[t];
  }

  const Tokens& cand_;
  const Tokens& ref_;
  std::vector<int> cand_ids_, ref_ids_;
  std::vector<int> need_;
  std::vector<int> remaining_in_cand_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<bool> used_;
  std::size_t matches_ = 0;
  std::size_t need_left_total_ = 0;
  int best_links_ = -1;
  std::size_t budget_ = 2'000'000;
};

}  // namespace

Alignment meteor_alignment(const Tokens& candidate, const Tokens& reference) {
  return AlignmentSearch(candidate, reference).run();
}

double meteor(const Tokens& candidate, const Tokens& reference) {
  require_reference(reference);
  const Alignment a = meteor_alignment(candidate, reference);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double f_mean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return 100.0 * f_mean * (1.0 - penalty);
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["bleu1"] = bleu1;
  j["bleu2"] = bleu2;
  j["bleu3"] = bleu3;
  j["bleu4"] = bleu4;
  j["meteor"] = meteor;
  j["rouge_l"] = rouge_l;
  j["n"] = n;
  return j.dump();
}

MetricReport sentence_report(std::string_view candidate, std::string_view reference) {
  const Tokens cand = tokenize(candidate);
  const Tokens ref = tokenize(reference);
  const auto bleu = bleu_norm(cand, ref, 4);
  MetricReport r;
  r.bleu1 = bleu[0];
  r.bleu2 = bleu[1];
  r.bleu3 = bleu[2];
  r.bleu4 = bleu[3];
  r.meteor = meteor(cand, ref);
  r.rouge_l = rouge_l(cand, ref);
  r.n = 1;
  return r;
}

MetricReport corpus_report(std::span<const TextPair> pairs) {
  if (pairs.empty()) throw EmptyCorpus("no candidate/reference pairs");
  MetricReport sum;
  for (const auto& p : pairs) {
    const MetricReport s = sentence_report(p.candidate, p.reference);
    sum.bleu1 += s.bleu1;
    sum.bleu2 += s.bleu2;
    sum.bleu3 += s.bleu3;
    sum.bleu4 += s.bleu4;
    sum.meteor += s.meteor;
    sum.rouge_l += s.rouge_l;
  }
  const double n = static_cast<double>(pairs.size());
  sum.bleu1 /= n;
  sum.bleu2 /= n;
  sum.bleu3 /= n;
  sum.bleu4 /= n;
  sum.meteor /= n;
  sum.rouge_l /= n;
  sum.n = pairs.size();
  return sum;
}

}  // namespace deltamsg::metrics
