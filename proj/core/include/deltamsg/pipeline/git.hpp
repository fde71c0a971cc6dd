#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deltamsg/corpus/corpus.hpp"

namespace deltamsg::pipeline {

struct ProcessResult {
  int status = 0;
  std::string out;
  std::string err;
};

// Runs `git -C repo args...` without a shell; stdout and stderr are captured.
ProcessResult run_git(const std::filesystem::path& repo, const std::vector<std::string>& args);

struct ExtractSummary {
  std::size_t commits = 0;  // commits in range, merges included
  std::size_t merges_skipped = 0;
  std::size_t records = 0;
};

// One CommitRecord per modified .java file in each non-merge commit of
// `range` (a rev-list argument, HEAD by default), oldest first. Added files
// have an empty old_text, deleted files an empty new_text. Throws NotARepo
// and GitCommandFailed.
std::vector<corpus::CommitRecord> extract_commits(const std::filesystem::path& repo, const std::string& range = "HEAD",
                                                  ExtractSummary* summary = nullptr);

}  // namespace deltamsg::pipeline
