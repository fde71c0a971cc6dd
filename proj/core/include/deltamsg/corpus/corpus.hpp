#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace deltamsg::corpus {

struct CommitRecord {
  std::string repo;
  std::string sha;
  std::string path;
  std::string message_raw;
  std::string message;  // first line of message_raw, trimmed
  std::string old_text;
  std::string new_text;
  std::string diff_text;

  friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

enum class Split { Train, Valid, Test };
std::string_view to_string(Split s);

struct Corpus {
  std::vector<CommitRecord> records;
  // Parallel to records once split_corpus has run; empty before.
  std::vector<Split> split;

  std::vector<const CommitRecord*> in_split(Split s) const;
};

struct LoadReport {
  std::size_t lines = 0;  // non-blank lines seen
  std::size_t malformed = 0;
  std::vector<std::string> warnings;
};

// First line of a raw message, without the line terminator, trimmed.
std::string first_line(std::string_view raw);

// JSON-Lines, one {"repo","sha","path","message_raw","old_text","new_text",
// "diff_text"} object per line. Malformed lines are skipped and reported;
// more than 10% malformed lines raises FormatError.
Corpus parse_corpus(std::string_view text, LoadReport* report = nullptr);
Corpus load_corpus(const std::filesystem::path& path, LoadReport* report = nullptr);

// One JSONL line (without trailing newline) in the load_corpus schema.
std::string record_to_jsonl(const CommitRecord& record);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

// Deterministic split keyed by a seeded hash of (repo, sha). Sizes use
// floor(ratio * n) per split, with the remainder handed out by largest
// fractional part (ties in train, valid, test order). With by_repo, whole
// repositories are assigned to one split. Throws InvalidRatio when a ratio is
// negative or the sum differs from 1 by more than 1e-9.
Corpus split_corpus(Corpus corpus, SplitRatios ratios, std::uint64_t seed, bool by_repo = false);

// Split sizes for n records under `ratios`.
std::array<std::size_t, 3> split_sizes(std::size_t n, SplitRatios ratios);

}  // namespace deltamsg::corpus
