#include "deltamsg/pipeline/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "deltamsg/cpg/cpg.hpp"
#include "deltamsg/errors.hpp"
#include "deltamsg/gen/template_backend.hpp"
#include "json.hpp"

namespace deltamsg::pipeline {

namespace {

std::string_view status_name(CommitStatus s) {
  switch (s) {
    case CommitStatus::Ok:
      return "OK";
    case CommitStatus::Skipped:
      return "SKIPPED";
    case CommitStatus::Failed:
      return "FAILED";
  }
  return "?";
}

}  // namespace

void RunConfig::apply_env() {
  const auto env = gen::EndpointConfig::from_env();
  if (!env.url.empty()) endpoint.url = env.url;
  if (!env.token.empty()) endpoint.token = env.token;
  if (!env.model.empty()) endpoint.model = env.model;
  if (const char* w = std::getenv("DELTAMSG_WORKERS"); w && *w) {
    char* end = nullptr;
    const long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError(std::string("DELTAMSG_WORKERS must be a positive integer, got ") + w);
    workers = static_cast<std::size_t>(v);
  }
}

void RunConfig::validate() const {
  if (max_input_len < 3) throw ConfigError("max_input_len must be at least 3");
  if (n_candidates < 1) throw ConfigError("n_candidates must be at least 1");
  if (max_gen_len < 1) throw ConfigError("max_gen_len must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (shots > gen::kMaxShots) throw ConfigError("at most 5 shots are supported");
  if (rank && checkpoint.empty()) throw ConfigError("ranking needs a QA checkpoint");
  gen::find_template(template_id);
  if (backend == gen::Backend::Llm) endpoint.validate();
}

std::string CommitResult::to_json(bool timing) const {
  nlohmann::ordered_json j;
  j["repo"] = repo;
  j["sha"] = sha;
  j["path"] = path;
  j["status"] = status_name(status);
  if (!reason.empty()) j["reason"] = reason;
  j["message"] = status == CommitStatus::Ok ? nlohmann::ordered_json(message) : nlohmann::ordered_json(nullptr);
  auto& cands = j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : candidates) {
    nlohmann::ordered_json cj;
    cj["text"] = c.text;
    cj["backend"] = gen::to_string(c.backend);
    cj["prompt_setting"] = gen::to_string(c.prompt_setting);
    if (c.rank_score) cj["score"] = *c.rank_score;
    cands.push_back(std::move(cj));
  }
  auto& d = j["delta"];
  d["added_edges"] = stats.added_edges;
  d["deleted_edges"] = stats.deleted_edges;
  d["context_edges"] = stats.context_edges;
  d["tokens"] = stats.tokens;
  d["truncated"] = stats.truncated;
  if (timing) j["elapsed_ms"] = elapsed_ms;
  return j.dump();
}

std::string RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok;
  j["skipped"] = skipped;
  j["failed"] = failed;
  j["total"] = total();
  return j.dump();
}

cpg::CpgGraph parse_version(const std::string& path, const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  return cpg::build_cpg(cpg::SourceUnit{path, text});
}

Pipeline::Pipeline(RunConfig config, const corpus::Corpus& corpus) : config_(std::move(config)) {
  config_.validate();
  if (config_.rank) model_ = std::make_shared<const qa::QaModel>(qa::load_checkpoint(config_.checkpoint));
  if (config_.backend == gen::Backend::Llm && config_.shots > 0) {
    std::vector<const corpus::CommitRecord*> pool;
    if (corpus.split.empty()) {
      for (const auto& r : corpus.records) pool.push_back(&r);
    } else {
      pool = corpus.in_split(corpus::Split::Train);
    }
    if (!pool.empty()) shots_ = gen::build_shot_index(std::span<const corpus::CommitRecord* const>(pool));
  }
}

CommitResult Pipeline::process(const corpus::CommitRecord& record) const {
  const auto start = std::chrono::steady_clock::now();
  CommitResult r;
  r.repo = record.repo;
  r.sha = record.sha;
  r.path = record.path;
  auto finish = [&]() -> CommitResult {
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(r);
  };

  cpg::CpgGraph old_graph, new_graph;
  try {
    old_graph = parse_version(record.path, record.old_text);
  } catch (const Error& e) {
    r.status = CommitStatus::Skipped;
    r.reason = std::string("old version does not parse: ") + e.what();
    return finish();
  }
  try {
    new_graph = parse_version(record.path, record.new_text);
  } catch (const Error& e) {
    r.status = CommitStatus::Skipped;
    r.reason = std::string("new version does not parse: ") + e.what();
    return finish();
  }

  try {
    const delta::DeltaGraph d = delta::build_delta(old_graph, new_graph);
    const delta::LinearizedChange lin = delta::linearize(d, config_.max_input_len);
    r.stats = {d.added_edges.size(), d.deleted_edges.size(), d.context_edges.size(), lin.tokens.size(),
               lin.truncated};

    std::vector<gen::CandidateMessage> cands;
    if (config_.backend == gen::Backend::Template) {
      cands = gen::template_generate(d, config_.n_candidates);
    } else {
      const std::string diff = record.diff_text.empty() ? lin.to_line() : record.diff_text;
      std::vector<gen::Shot> retrieved;
      if (shots_) retrieved = gen::retrieve_shots(*shots_, diff, config_.shots, gen::RecordId{record.repo, record.sha});
      const gen::PromptSpec spec =
          gen::make_prompt_spec(retrieved, config_.shots, config_.template_id, config_.reasoning);
      const std::string prompt = gen::build_prompt(spec, diff, config_.prompt_budget);
      cands = gen::llm_generate(prompt, config_.endpoint, config_.n_candidates, spec.setting);
    }
    for (auto& c : cands) c.text = gen::clamp_message(c.text, config_.max_gen_len);
    if (model_) cands = qa::rank_candidates(d, std::move(cands), *model_);
    r.message = cands.front().text;
    r.candidates = std::move(cands);
  } catch (const std::exception& e) {
    r.status = CommitStatus::Failed;
    r.reason = e.what();
  }
  return finish();
}

std::vector<const corpus::CommitRecord*> selected_records(const RunConfig& config, const corpus::Corpus& corpus,
                                                          corpus::Corpus* split_out) {
  std::vector<const corpus::CommitRecord*> out;
  if (config.split == SplitFilter::All) {
    for (const auto& r : corpus.records) out.push_back(&r);
    return out;
  }
  if (split_out == nullptr) throw ConfigError("split selection needs storage for the split corpus");
  *split_out = corpus::split_corpus(corpus, config.ratios, config.seed);
  const corpus::Split which = config.split == SplitFilter::Train   ? corpus::Split::Train
                              : config.split == SplitFilter::Valid ? corpus::Split::Valid
                                                                   : corpus::Split::Test;
  return split_out->in_split(which);
}

RunSummary run_pipeline(const RunConfig& config, const corpus::Corpus& corpus,
                        const std::function<void(const CommitResult&)>& sink) {
  corpus::Corpus split;
  const auto records = selected_records(config, corpus, &split);
  const Pipeline pipeline(config, config.split == SplitFilter::All ? corpus : split);
  RunSummary summary;
  auto emit = [&](const CommitResult& r) {
    switch (r.status) {
      case CommitStatus::Ok:
        ++summary.ok;
        break;
      case CommitStatus::Skipped:
        ++summary.skipped;
        break;
      case CommitStatus::Failed:
        ++summary.failed;
        break;
    }
    sink(r);
  };

  const std::size_t n = records.size();
  const std::size_t workers = std::min(config.workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (const auto* rec : records) emit(pipeline.process(*rec));
    return summary;
  }

  // Workers claim indices in order; the caller drains finished results in
  // input order. Claims run at most `window` ahead of the drain position.
  const std::size_t window = workers * 4;
  std::vector<std::optional<CommitResult>> slots(n);
  std::mutex mu;
  std::condition_variable cv;
  std::size_t next = 0, drained = 0;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return next >= n || next < drained + window; });
        if (next >= n) return;
        i = next++;
      }
      CommitResult res = pipeline.process(*records[i]);
      {
        std::lock_guard lock(mu);
        slots[i] = std::move(res);
      }
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  auto stop = [&] {
    {
      std::lock_guard lock(mu);
      next = n;
    }
    cv.notify_all();
    for (auto& t : pool) t.join();
  };
  try {
    for (std::size_t i = 0; i < n; ++i) {
      CommitResult res;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[i].has_value(); });
        res = std::move(*slots[i]);
        slots[i].reset();
        ++drained;
      }
      cv.notify_all();
      emit(res);
    }
  } catch (...) {
    stop();
    throw;
  }
  stop();
  return summary;
}

}  // namespace deltamsg::pipeline
