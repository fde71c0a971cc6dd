#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deltamsg/corpus/corpus.hpp"
#include "deltamsg/delta/linearize.hpp"
#include "deltamsg/gen/llm_client.hpp"
#include "deltamsg/gen/prompt.hpp"
#include "deltamsg/qa/model.hpp"

namespace deltamsg::pipeline {

enum class SplitFilter { All, Train, Valid, Test };

struct RunConfig {
  gen::Backend backend = gen::Backend::Template;
  std::size_t shots = 0;
  std::string template_id = gen::kDefaultTemplate;
  bool reasoning = false;
  std::size_t n_candidates = gen::kDefaultCandidates;
  std::size_t max_input_len = delta::kDefaultMaxInputLen;
  std::size_t max_gen_len = gen::kDefaultMaxGenLen;
  std::size_t prompt_budget = gen::kDefaultPromptBudget;
  std::uint64_t seed = 0;
  SplitFilter split = SplitFilter::All;
  corpus::SplitRatios ratios;
  bool rank = false;
  std::filesystem::path checkpoint;
  gen::EndpointConfig endpoint;
  std::size_t workers = 1;
  bool timing = false;

  // Reads DELTAMSG_LLM_URL / _TOKEN / _MODEL and DELTAMSG_WORKERS; explicit
  // settings made afterwards take precedence.
  void apply_env();
  // Throws ConfigError.
  void validate() const;
};

enum class CommitStatus { Ok, Skipped, Failed };

struct DeltaStats {
  std::size_t added_edges = 0;
  std::size_t deleted_edges = 0;
  std::size_t context_edges = 0;
  std::size_t tokens = 0;
  bool truncated = false;
};

struct CommitResult {
  std::string repo;
  std::string sha;
  std::string path;
  CommitStatus status = CommitStatus::Ok;
  std::string reason;
  std::string message;
  std::vector<gen::CandidateMessage> candidates;
  DeltaStats stats;
  double elapsed_ms = 0.0;

  // One JSON object; elapsed time only when `timing`.
  std::string to_json(bool timing = false) const;
};

struct RunSummary {
  std::size_t ok = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  std::size_t total() const noexcept { return ok + skipped + failed; }
  std::string to_json() const;
};

// Shared read-only state for processing commits: config, optional QA model
// and shot index.
class Pipeline {
 public:
  // `corpus` supplies the shot pool; it may be empty when shots == 0.
  Pipeline(RunConfig config, const corpus::Corpus& corpus);
  CommitResult process(const corpus::CommitRecord& record) const;
  const RunConfig& config() const noexcept { return config_; }

 private:
  RunConfig config_;
  std::shared_ptr<const qa::QaModel> model_;
  std::optional<gen::ShotIndex> shots_;
};

// Processes the selected split of `corpus`, `workers` at a time, calling
// `sink` for every result in input order. A failing commit never stops the
// stream.
RunSummary run_pipeline(const RunConfig& config, const corpus::Corpus& corpus,
                        const std::function<void(const CommitResult&)>& sink);

// Records run_pipeline would process for this config.
std::vector<const corpus::CommitRecord*> selected_records(const RunConfig& config, const corpus::Corpus& corpus,
                                                          corpus::Corpus* split_out = nullptr);

// Parses one program version; whitespace-only text yields an empty graph.
cpg::CpgGraph parse_version(const std::string& path, const std::string& text);

}  // namespace deltamsg::pipeline
