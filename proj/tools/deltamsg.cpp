#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "deltamsg/corpus/filter.hpp"
#include "deltamsg/cpg/cpg.hpp"
#include "deltamsg/delta/linearize.hpp"
#include "deltamsg/errors.hpp"
#include "deltamsg/gen/template_backend.hpp"
#include "deltamsg/io.hpp"
#include "deltamsg/metrics/metrics.hpp"
#include "deltamsg/pipeline/git.hpp"
#include "deltamsg/pipeline/pipeline.hpp"
#include "deltamsg/pipeline/train.hpp"
#include "json.hpp"

namespace {

using namespace deltamsg;
using nlohmann::ordered_json;

enum Exit : int { kOk = 0, kUsage = 1, kEnvironment = 2, kTotalFailure = 3 };

// Writes to a file when a path is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void line(const std::string& s) { stream() << s << '\n'; }
  ~Output() {
    if (file_.is_open()) file_.close();
  }

 private:
  std::ofstream file_;
};

struct GenOptions {
  std::string backend = "template";
  std::size_t shots = 0;
  std::string template_id = gen::kDefaultTemplate;
  bool reasoning = false;
  std::size_t n = gen::kDefaultCandidates;
  std::size_t max_gen_len = gen::kDefaultMaxGenLen;
  std::size_t prompt_budget = gen::kDefaultPromptBudget;
  std::string extra_params;
  std::string prompt_pointer, output_pointer;

  void add_to(CLI::App* app) {
    app->add_option("--backend", backend, "Candidate generator")->check(CLI::IsMember({"template", "llm"}));
    app->add_option("--shots", shots, "Retrieved examples in the prompt (0, 1, or up to 5)")->check(CLI::Range(0, 5));
    app->add_option("--prompt-template", template_id, "Bundled prompt template id");
    app->add_flag("--reasoning", reasoning, "Add the step-by-step preamble to prompts");
    app->add_option("--n-candidates", n, "Candidates per commit")->check(CLI::PositiveNumber);
    app->add_option("--max-gen-len", max_gen_len, "Token cap for messages")->check(CLI::PositiveNumber);
    app->add_option("--prompt-budget", prompt_budget, "Prompt size cap in bytes")->check(CLI::PositiveNumber);
    app->add_option("--llm-params", extra_params, "JSON object merged into each request body");
    app->add_option("--llm-prompt-path", prompt_pointer, "JSON pointer for the prompt in the request");
    app->add_option("--llm-output-path", output_pointer, "JSON pointer for the reply text");
  }

  void apply(pipeline::RunConfig& c) const {
    c.backend = backend == "llm" ? gen::Backend::Llm : gen::Backend::Template;
    c.shots = shots;
    c.template_id = template_id;
    c.reasoning = reasoning;
    c.n_candidates = n;
    c.max_gen_len = max_gen_len;
    c.prompt_budget = prompt_budget;
    if (!extra_params.empty()) c.endpoint.extra_params = extra_params;
    if (!prompt_pointer.empty()) c.endpoint.prompt_pointer = prompt_pointer;
    if (!output_pointer.empty()) c.endpoint.output_pointer = output_pointer;
  }
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  return read_text_file(path);
}

int cmd_extract(const std::string& repo, const std::string& range, const std::string& out, bool filter,
                const std::string& filter_config) {
  pipeline::ExtractSummary summary;
  auto records = pipeline::extract_commits(repo, range, &summary);
  std::size_t rejected = 0;
  Output o(out);
  const corpus::FilterConfig cfg = filter_config.empty() ? corpus::FilterConfig{} : corpus::FilterConfig::load(filter_config);
  for (const auto& r : records) {
    if (filter && !corpus::filter_commit(r, cfg).accepted()) {
      ++rejected;
      continue;
    }
    o.line(corpus::record_to_jsonl(r));
  }
  ordered_json s;
  s["commits"] = summary.commits;
  s["merges_skipped"] = summary.merges_skipped;
  s["records"] = summary.records - rejected;
  if (filter) s["filtered_out"] = rejected;
  std::cerr << s.dump() << '\n';
  return kOk;
}

int cmd_delta(const std::string& old_path, const std::string& new_path, const std::string& out, bool linear,
              std::size_t max_input_len) {
  const auto old_graph = cpg::load_version(old_path);
  const auto new_graph = cpg::load_version(new_path);
  const auto d = delta::build_delta(old_graph, new_graph);
  Output o(out);
  o.line(linear ? delta::linearize(d, max_input_len).to_line() : delta::export_delta_json(d));
  return kOk;
}

ordered_json candidate_json(const gen::CandidateMessage& c) {
  ordered_json j;
  j["text"] = c.text;
  j["backend"] = gen::to_string(c.backend);
  j["prompt_setting"] = gen::to_string(c.prompt_setting);
  if (c.rank_score) j["score"] = *c.rank_score;
  return j;
}

int cmd_generate(const std::string& delta_path, const GenOptions& g, const std::string& diff_path,
                 const std::string& corpus_path, const std::string& out, bool print_prompt) {
  const auto d = delta::import_delta_json(read_input(delta_path));
  pipeline::RunConfig cfg;
  cfg.apply_env();
  g.apply(cfg);
  std::vector<gen::CandidateMessage> cands;
  Output o(out);
  if (cfg.backend == gen::Backend::Template) {
    cfg.validate();
    cands = gen::template_generate(d, cfg.n_candidates);
  } else {
    const std::string diff =
        diff_path.empty() ? delta::linearize(d, delta::kDefaultMaxInputLen).to_line() : read_text_file(diff_path);
    std::vector<gen::Shot> shots;
    if (cfg.shots > 0) {
      if (corpus_path.empty()) throw ConfigError("--shots needs --corpus for retrieval");
      const auto index = gen::build_shot_index(corpus::load_corpus(corpus_path));
      shots = gen::retrieve_shots(index, diff, cfg.shots);
    }
    const auto spec = gen::make_prompt_spec(shots, cfg.shots, cfg.template_id, cfg.reasoning);
    const std::string prompt = gen::build_prompt(spec, diff, cfg.prompt_budget);
    if (print_prompt) {
      o.stream() << prompt;
      return kOk;
    }
    cfg.validate();
    cands = gen::llm_generate(prompt, cfg.endpoint, cfg.n_candidates, spec.setting);
  }
  for (auto& c : cands) {
    c.text = gen::clamp_message(c.text, cfg.max_gen_len);
    o.line(candidate_json(c).dump());
  }
  return kOk;
}

std::vector<gen::CandidateMessage> read_candidates(const std::string& path) {
  std::vector<gen::CandidateMessage> out;
  std::istringstream in(read_input(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    gen::CandidateMessage c;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("text") && j["text"].is_string()) {
      c.text = j["text"].get<std::string>();
      if (j.value("backend", "") == "LLM") c.backend = gen::Backend::Llm;
    } else {
      c.text = line;
    }
    c.text = gen::clamp_message(c.text);
    if (!c.text.empty()) out.push_back(std::move(c));
  }
  if (out.empty()) throw ConfigError("no candidates in " + path);
  return out;
}

int cmd_rank(const std::string& delta_path, const std::string& candidates_path, const std::string& checkpoint,
             const std::string& out) {
  const auto d = delta::import_delta_json(read_text_file(delta_path));
  const auto model = qa::load_checkpoint(checkpoint);
  Output o(out);
  for (const auto& c : qa::rank_candidates(d, read_candidates(candidates_path), model)) o.line(candidate_json(c).dump());
  return kOk;
}

int cmd_evaluate(const std::string& pairs_path, bool per_sentence, const std::string& out) {
  std::vector<metrics::TextPair> pairs;
  std::istringstream in(read_input(pairs_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    const std::string where = "line " + std::to_string(lineno);
    if (j.is_discarded() || !j.is_object()) throw FormatError(where, "not a JSON object");
    for (const char* k : {"candidate", "reference"}) {
      if (!j.contains(k) || !j[k].is_string()) throw FormatError(where + "." + k, "missing or not a string");
    }
    pairs.push_back({j["candidate"].get<std::string>(), j["reference"].get<std::string>()});
  }
  Output o(out);
  if (per_sentence) {
    for (const auto& p : pairs) o.line(metrics::sentence_report(p.candidate, p.reference).to_json());
  } else {
    o.line(metrics::corpus_report(pairs).to_json());
  }
  return kOk;
}

int cmd_train(const std::string& labeled, const std::string& out, const qa::QaTrainOptions& options) {
  qa::QaTrainReport rep;
  const auto r = pipeline::train_qa(labeled, out, options, &rep);
  ordered_json j;
  j["checkpoint"] = r.checkpoint.string();
  j["examples"] = r.examples;
  j["epochs"] = rep.scorer.epochs_run;
  j["initial_loss"] = rep.scorer.losses.empty() ? 0.0 : rep.scorer.losses.front();
  j["final_loss"] = r.final_loss;
  j["accuracy"] = r.accuracy;
  std::cout << j.dump() << '\n';
  return kOk;
}

int cmd_run(pipeline::RunConfig cfg, const std::string& corpus_path, const std::string& repo, const std::string& range,
            const std::string& out) {
  corpus::Corpus c;
  if (!corpus_path.empty()) {
    corpus::LoadReport rep;
    c = corpus::load_corpus(corpus_path, &rep);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  } else {
    c.records = pipeline::extract_commits(repo, range);
  }
  Output o(out);
  const auto summary = pipeline::run_pipeline(cfg, c, [&](const pipeline::CommitResult& r) {
    o.line(r.to_json(cfg.timing));
    o.stream().flush();
  });
  std::cerr << summary.to_json() << '\n';
  if (summary.total() > 0 && summary.ok == 0) return kTotalFailure;
  return kOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Delta-graph commit message toolchain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string out;
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--output", out, "Output file (default stdout)"); };

  std::string repo = ".", range = "HEAD", filter_config;
  bool filter = false;
  auto* extract = app.add_subcommand("extract", "Write a JSONL corpus of .java changes from a git repository");
  extract->add_option("repo", repo, "Repository path");
  extract->add_option("--range", range, "Revision range passed to git rev-list");
  extract->add_flag("--filter", filter, "Drop records rejected by the quality rules");
  extract->add_option("--filter-config", filter_config, "key=value rule configuration")->check(CLI::ExistingFile);
  add_out(extract);

  std::string old_path, new_path;
  bool linear = false;
  std::size_t max_input_len = delta::kDefaultMaxInputLen;
  auto* delta_cmd = app.add_subcommand("delta", "Delta graph of two program versions (source or CPG JSON)");
  delta_cmd->add_option("old", old_path, "Old version")->required();
  delta_cmd->add_option("new", new_path, "New version")->required();
  delta_cmd->add_flag("--linearize", linear, "Print the marked token sequence instead of JSON");
  delta_cmd->add_option("--max-input-len", max_input_len, "Token cap for --linearize")->check(CLI::Range(3, 1 << 20));
  add_out(delta_cmd);

  std::string delta_path, diff_path, corpus_path;
  bool print_prompt = false;
  GenOptions gen_opts;
  auto* generate = app.add_subcommand("generate", "Candidate messages for a delta JSON file");
  generate->add_option("delta", delta_path, "Delta JSON ('-' for stdin)")->required();
  generate->add_option("--diff", diff_path, "Textual diff used in LLM prompts")->check(CLI::ExistingFile);
  generate->add_option("--corpus", corpus_path, "Corpus for shot retrieval")->check(CLI::ExistingFile);
  generate->add_flag("--print-prompt", print_prompt, "Print the LLM prompt and stop");
  gen_opts.add_to(generate);
  add_out(generate);

  std::string candidates_path, checkpoint;
  auto* rank = app.add_subcommand("rank", "Order candidate messages with a QA checkpoint");
  rank->add_option("delta", delta_path, "Delta JSON")->required()->check(CLI::ExistingFile);
  rank->add_option("candidates", candidates_path, "One candidate per line, plain or {\"text\":...}")->required();
  rank->add_option("--checkpoint", checkpoint, "QA checkpoint")->required()->check(CLI::ExistingFile);
  add_out(rank);

  std::string pairs_path;
  bool per_sentence = false;
  auto* evaluate = app.add_subcommand("evaluate", "BLEU, METEOR and ROUGE-L over candidate/reference pairs");
  evaluate->add_option("pairs", pairs_path, "JSONL of {\"candidate\",\"reference\"} ('-' for stdin)")->required();
  evaluate->add_flag("--per-sentence", per_sentence, "One report per pair");
  add_out(evaluate);

  std::string labeled;
  qa::QaTrainOptions train_opts;
  std::string optimizer = "adam";
  auto* train = app.add_subcommand("train-qa", "Train the QA ranking model on labeled delta/message pairs");
  train->add_option("labeled", labeled, "JSONL of {\"delta\",\"message\",\"label\"}")->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output", out, "Checkpoint path")->required();
  train->add_option("--seed", train_opts.seed, "Initialization and batch-order seed");
  train->add_option("--epochs", train_opts.scorer.epochs, "Scorer epochs")->check(CLI::NonNegativeNumber);
  train->add_option("--lr", train_opts.scorer.lr, "Scorer learning rate")->check(CLI::NonNegativeNumber);
  train->add_option("--batch-size", train_opts.scorer.batch_size, "Scorer mini-batch size")->check(CLI::PositiveNumber);
  train->add_option("--pretrain-epochs", train_opts.pretrain.epochs, "GCN node-classification epochs")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--pretrain-lr", train_opts.pretrain.lr, "GCN learning rate")->check(CLI::NonNegativeNumber);
  train->add_option("--optimizer", optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));

  pipeline::RunConfig run_cfg;
  std::string split = "all";
  std::size_t workers = 0;
  auto* run = app.add_subcommand("run", "Full pipeline over a corpus file or a repository");
  auto* corpus_opt = run->add_option("--corpus", corpus_path, "JSONL corpus")->check(CLI::ExistingFile);
  auto* repo_opt = run->add_option("--repo", repo, "Git repository to extract from");
  corpus_opt->excludes(repo_opt);
  run->add_option("--range", range, "Revision range with --repo");
  run->add_option("--split", split, "Process one split of the corpus")
      ->check(CLI::IsMember({"all", "train", "valid", "test"}));
  run->add_option("--seed", run_cfg.seed, "Split seed");
  run->add_option("--max-input-len", run_cfg.max_input_len, "Linearization token cap")->check(CLI::Range(3, 1 << 20));
  run->add_flag("--rank", run_cfg.rank, "Rank candidates with --checkpoint");
  run->add_option("--checkpoint", checkpoint, "QA checkpoint")->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Parallel commits (default DELTAMSG_WORKERS or 1)")->check(CLI::PositiveNumber);
  run->add_flag("--timing", run_cfg.timing, "Include per-commit elapsed time");
  gen_opts.add_to(run);
  add_out(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (extract->parsed()) return cmd_extract(repo, range, out, filter, filter_config);
  if (delta_cmd->parsed()) return cmd_delta(old_path, new_path, out, linear, max_input_len);
  if (generate->parsed()) return cmd_generate(delta_path, gen_opts, diff_path, corpus_path, out, print_prompt);
  if (rank->parsed()) return cmd_rank(delta_path, candidates_path, checkpoint, out);
  if (evaluate->parsed()) return cmd_evaluate(pairs_path, per_sentence, out);
  if (train->parsed()) {
    const auto kind = optimizer == "sgd" ? qa::Optimizer::Sgd : qa::Optimizer::Adam;
    train_opts.scorer.optimizer = kind;
    train_opts.pretrain.optimizer = kind;
    train_opts.scorer.seed = train_opts.seed;
    return cmd_train(labeled, out, train_opts);
  }
  if (run->parsed()) {
    if (corpus_path.empty() && repo_opt->count() == 0) throw ConfigError("run needs --corpus or --repo");
    run_cfg.apply_env();
    gen_opts.apply(run_cfg);
    if (workers > 0) run_cfg.workers = workers;
    run_cfg.checkpoint = checkpoint;
    run_cfg.split = split == "train"   ? pipeline::SplitFilter::Train
                    : split == "valid" ? pipeline::SplitFilter::Valid
                    : split == "test"  ? pipeline::SplitFilter::Test
                                       : pipeline::SplitFilter::All;
    run_cfg.validate();
    return cmd_run(run_cfg, corpus_path, repo, range, out);
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const NotARepo& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const GitCommandFailed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const RequestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
