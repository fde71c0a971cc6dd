#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deltamsg/delta/delta.hpp"
#include "deltamsg/gen/candidate.hpp"
#include "deltamsg/qa/gcn.hpp"
#include "deltamsg/qa/graphs.hpp"
#include "deltamsg/qa/scorer.hpp"

namespace deltamsg::qa {

// Probability at or above which a pair counts as preferred. Similarity
// scores never exceed 0.5, so the midpoint of their range is used.
inline constexpr double kDecisionThreshold = 0.25;

struct QaModel {
  std::uint64_t seed = 0;
  GcnParams code_gcn;  // edge classes
  GcnParams text_gcn;  // word classes
  ScorerParams scorer;

  // Both GCN stacks share the seed so their hidden spaces start aligned.
  static QaModel init(std::uint64_t seed);
  void check() const;
  friend bool operator==(const QaModel& a, const QaModel& b);
};

struct TrainExample {
  delta::DeltaGraph delta;
  std::string message;
  int label = 0;
};

struct EncodedExample {
  Matrix code;  // n x 256 GCN output, possibly 0 rows
  Matrix text;
  int label = 0;
};

// Inference helper owning the embedder and text-graph builder used with a
// model. Pure and thread-safe for concurrent calls.
class QaEncoder {
 public:
  explicit QaEncoder(std::uint64_t embed_seed);
  Matrix encode_delta(const delta::DeltaGraph& delta, const GcnParams& gcn) const;
  Matrix encode_message(std::string_view message, const GcnParams& gcn) const;
  NodeGraph line_graph(const delta::DeltaGraph& delta) const;
  NodeGraph text_graph(std::string_view message) const;
  const TokenEmbedder& embedder() const { return embedder_; }

 private:
  HashedTokenEmbedder embedder_;
  ChainTextGraphBuilder text_builder_;
};

std::vector<EncodedExample> encode_examples(std::span<const TrainExample> examples, const QaModel& model);

// Throws EmptyInputs when both the delta and the message are empty.
double score_pair(const delta::DeltaGraph& delta, std::string_view message, const QaModel& model,
                  ScoreMode mode = ScoreMode::Similarity);
double score_encoded(const Matrix& code, const Matrix& text, const ScorerParams& scorer,
                     ScoreMode mode = ScoreMode::Similarity);

// Attaches Similarity-mode scores and stable-sorts by descending score.
std::vector<gen::CandidateMessage> rank_candidates(const delta::DeltaGraph& delta,
                                                   std::vector<gen::CandidateMessage> candidates,
                                                   const QaModel& model);

struct TrainOptions {
  int epochs = 100;
  double lr = 1e-3;
  std::size_t batch_size = 16;
  Optimizer optimizer = Optimizer::Adam;
  std::uint64_t seed = 0;  // batch order
};

struct TrainReport {
  std::vector<double> losses;  // mean loss over the training set before each epoch, then final
  double accuracy = 0.0;       // at kDecisionThreshold, after training
  int epochs_run = 0;
};

// Binary cross-entropy on Similarity scores, mini-batches in seeded order.
// Throws DegenerateLabels unless both labels occur.
ScorerParams train_scorer(std::span<const EncodedExample> data, ScorerParams init, const TrainOptions& options,
                          TrainReport* report = nullptr);

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};
EvalResult evaluate_scorer(std::span<const EncodedExample> data, const ScorerParams& scorer);

struct QaTrainOptions {
  std::uint64_t seed = 0;
  PretrainOptions pretrain{20, 0.01, Optimizer::Adam};
  TrainOptions scorer;
};

struct QaTrainReport {
  PretrainReport code_pretrain;
  PretrainReport text_pretrain;
  bool text_pretrain_skipped = false;  // message labels had a single class
  TrainReport scorer;
};

// Pretrains the edge-class and word-class GCNs (frozen afterwards), then
// trains the scorer on their outputs.
QaModel train_qa_model(std::span<const TrainExample> examples, const QaTrainOptions& options,
                       QaTrainReport* report = nullptr);

struct GradCheckOptions {
  double epsilon = 1e-5;         // must lie in [1e-6, 1e-4]
  double sample_fraction = 0.01;
  std::uint64_t seed = 0;
  double denominator_floor = 1e-6;
  bool negate_analytic = false;  // for exercising the checker itself
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::string worst_parameter;
  bool finite = true;
};

// Central differences of the pair loss against the analytic gradient on a
// seeded sample of scorer parameters. Relative error is
// |a - n| / max(|a|, |n|, denominator_floor).
GradCheckReport grad_check(const ScorerParams& params, const EncodedExample& example,
                           const GradCheckOptions& options = {});

// Binary container: "DMQA", format version, seed, then named float64
// tensors with their shapes. Throws IoError / FormatError.
std::string serialize_model(const QaModel& model);
QaModel deserialize_model(std::string_view bytes);
void save_checkpoint(const QaModel& model, const std::filesystem::path& path);
QaModel load_checkpoint(const std::filesystem::path& path);

// JSONL records {"delta": <delta interchange object>, "message": str,
// "label": 0|1}. Throws FormatError naming the line.
std::vector<TrainExample> parse_train_examples(std::string_view text);
std::vector<TrainExample> load_train_examples(const std::filesystem::path& path);
std::string train_example_to_jsonl(const TrainExample& example);

}  // namespace deltamsg::qa
