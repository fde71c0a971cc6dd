#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "deltamsg/corpus/corpus.hpp"

namespace deltamsg::corpus {

enum class Rule {
  JavaOnly,
  ParseFail,
  TooShort,
  TooLong,
  MergeRevert,
  Bot,
  NonVerbStart,
  NonAsciiMajority,
};

std::string_view to_string(Rule r);
std::optional<Rule> parse_rule(std::string_view id);

struct FilterVerdict {
  std::vector<Rule> reasons;

  bool accepted() const noexcept { return reasons.empty(); }
};

// The bundled imperative-verb lexicon (lowercase).
const std::set<std::string>& default_verb_lexicon();

struct FilterConfig {
  std::size_t min_tokens = 3;
  std::size_t max_tokens = 30;
  double max_non_ascii_ratio = 0.5;
  std::vector<std::string> merge_prefixes{"merge", "revert", "rollback"};
  std::set<std::string> verbs = default_verb_lexicon();
  std::set<Rule> disabled;

  // Key-value file, one "key = value" per line, '#' comments:
  //   min_tokens, max_tokens, max_non_ascii_ratio,
  //   merge_prefixes (comma list), lexicon (verb file path, relative to the
  //   config file), disable (comma list of rule ids).
  // Throws ConfigError on unknown keys or bad values, IoError on I/O.
  static FilterConfig load(const std::filesystem::path& path);

  bool enabled(Rule r) const { return !disabled.count(r); }
};

// One lowercase verb per line; blank lines and '#' comments ignored.
std::set<std::string> load_verb_lexicon(const std::filesystem::path& path);

// Message rules, evaluated in declaration order: TOO_SHORT, TOO_LONG,
// MERGE_REVERT, BOT, NON_VERB_START, NON_ASCII_MAJORITY. Tokens are the
// whitespace-separated pieces of the (first-line) message.
FilterVerdict filter_message(std::string_view message, const FilterConfig& config = {});

// File rules: JAVA_ONLY when the path does not end in ".java"; otherwise
// PARSE_FAIL when a non-empty version fails to parse as mini-Java.
FilterVerdict filter_commit(const CommitRecord& record, const FilterConfig& config = {});

// Keeps records accepted by both filter_commit and filter_message.
Corpus filter_corpus(const Corpus& corpus, const FilterConfig& config = {});

}  // namespace deltamsg::corpus
