#include "deltamsg/qa/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "deltamsg/errors.hpp"
#include "deltamsg/hash.hpp"
#include "deltamsg/io.hpp"
#include "json.hpp"

namespace deltamsg::qa {

QaModel QaModel::init(std::uint64_t seed) {
  QaModel m;
  m.seed = seed;
  m.code_gcn = GcnParams::init(kEdgeClasses, seed);
  m.text_gcn = GcnParams::init(kWordClasses, seed);
  m.scorer = ScorerParams::init(mix64(seed ^ 0x5c0e));
  return m;
}

void QaModel::check() const {
  code_gcn.check();
  text_gcn.check();
  scorer.check();
  if (code_gcn.classes() != kEdgeClasses) throw ShapeError("code GCN head must have 3 classes");
  if (text_gcn.classes() != kWordClasses) throw ShapeError("text GCN head must have 2 classes");
}

namespace {

ConstTensorList model_tensors(const QaModel& m) {
  ConstTensorList out;
  for (const auto& [n, t] : m.code_gcn.tensors()) out.emplace_back("code_gcn." + n, t);
  for (const auto& [n, t] : m.text_gcn.tensors()) out.emplace_back("text_gcn." + n, t);
  for (const auto& [n, t] : m.scorer.tensors()) out.emplace_back("scorer." + n, t);
  return out;
}

TensorList model_tensors(QaModel& m) {
  TensorList out;
  for (const auto& [n, t] : m.code_gcn.tensors()) out.emplace_back("code_gcn." + n, t);
  for (const auto& [n, t] : m.text_gcn.tensors()) out.emplace_back("text_gcn." + n, t);
  for (const auto& [n, t] : m.scorer.tensors()) out.emplace_back("scorer." + n, t);
  return out;
}

const QaEncoder& shared_encoder(std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::unique_ptr<QaEncoder>> encoders;
  std::lock_guard lock(mu);
  auto& slot = encoders[seed];
  if (!slot) slot = std::make_unique<QaEncoder>(seed);
  return *slot;
}

}  // namespace

bool operator==(const QaModel& a, const QaModel& b) {
  if (a.seed != b.seed) return false;
  const auto ta = model_tensors(a);
  const auto tb = model_tensors(b);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const Matrix& x = *ta[i].second;
    const Matrix& y = *tb[i].second;
    if (x.rows() != y.rows() || x.cols() != y.cols() || x != y) return false;
  }
  return true;
}

QaEncoder::QaEncoder(std::uint64_t embed_seed) : embedder_(embed_seed) {}

NodeGraph QaEncoder::line_graph(const delta::DeltaGraph& delta) const { return build_line_graph(delta, embedder_); }

NodeGraph QaEncoder::text_graph(std::string_view message) const { return text_builder_.build(message, embedder_); }

Matrix QaEncoder::encode_delta(const delta::DeltaGraph& delta, const GcnParams& gcn) const {
  const NodeGraph g = line_graph(delta);
  if (g.size() == 0) return Matrix(0, kGcnHidden);
  return gcn_forward(g, gcn);
}

Matrix QaEncoder::encode_message(std::string_view message, const GcnParams& gcn) const {
  const NodeGraph g = text_graph(message);
  if (g.size() == 0) return Matrix(0, kGcnHidden);
  return gcn_forward(g, gcn);
}

std::vector<EncodedExample> encode_examples(std::span<const TrainExample> examples, const QaModel& model) {
  const QaEncoder& enc = shared_encoder(model.seed);
  std::vector<EncodedExample> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    out.push_back({enc.encode_delta(e.delta, model.code_gcn), enc.encode_message(e.message, model.text_gcn),
                   e.label});
  }
  return out;
}

double score_encoded(const Matrix& code, const Matrix& text, const ScorerParams& scorer, ScoreMode mode) {
  const Vector p = scorer_forward(code, scorer);
  const Vector q = scorer_forward(text, scorer);
  return score_from_distance((p - q).norm(), mode);
}

double score_pair(const delta::DeltaGraph& delta, std::string_view message, const QaModel& model, ScoreMode mode) {
  if (delta.empty() && message_words(message).empty()) throw EmptyInputs("both the delta and the message are empty");
  const QaEncoder& enc = shared_encoder(model.seed);
  return score_encoded(enc.encode_delta(delta, model.code_gcn), enc.encode_message(message, model.text_gcn),
                       model.scorer, mode);
}

std::vector<gen::CandidateMessage> rank_candidates(const delta::DeltaGraph& delta,
                                                   std::vector<gen::CandidateMessage> candidates,
                                                   const QaModel& model) {
  const QaEncoder& enc = shared_encoder(model.seed);
  const Matrix code = enc.encode_delta(delta, model.code_gcn);
  const Vector p = scorer_forward(code, model.scorer);
  for (auto& c : candidates) {
    const Vector q = scorer_forward(enc.encode_message(c.text, model.text_gcn), model.scorer);
    c.rank_score = score_from_distance((p - q).norm(), ScoreMode::Similarity);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return *a.rank_score > *b.rank_score; });
  return candidates;
}

namespace {

void require_both_labels(std::span<const EncodedExample> data) {
  bool pos = false, neg = false;
  for (const auto& e : data) {
    if (e.label != 0 && e.label != 1) throw FormatError("label", "must be 0 or 1");
    (e.label ? pos : neg) = true;
  }
  if (!pos || !neg) throw DegenerateLabels("training pairs need both labels");
}

}  // namespace

EvalResult evaluate_scorer(std::span<const EncodedExample> data, const ScorerParams& scorer) {
  EvalResult r;
  if (data.empty()) return r;
  std::size_t correct = 0;
  for (const auto& e : data) {
    const PairOutput o = pair_forward(e.code, e.text, e.label, scorer);
    r.loss += o.loss;
    correct += (o.score >= kDecisionThreshold) == (e.label == 1);
  }
  r.loss /= static_cast<double>(data.size());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return r;
}

ScorerParams train_scorer(std::span<const EncodedExample> data, ScorerParams params, const TrainOptions& options,
                          TrainReport* report) {
  require_both_labels(data);
  params.check();
  const std::size_t batch = std::max<std::size_t>(options.batch_size, 1);
  OptimizerState opt(options.optimizer);
  std::mt19937_64 gen(mix64(options.seed ^ 0xba7c));
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> losses;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[gen() % (i + 1)]);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::vector<Matrix> grads = zero_grads(params);
      for (std::size_t i = start; i < end; ++i) {
        const auto& e = data[order[i]];
        epoch_loss += pair_forward(e.code, e.text, e.label, params, &grads).loss;
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      std::vector<const Matrix*> gp;
      for (auto& g : grads) {
        g *= scale;
        gp.push_back(&g);
      }
      opt.step(params.tensors(), gp, options.lr);
    }
    losses.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  if (report) {
    const EvalResult final_eval = evaluate_scorer(data, params);
    losses.push_back(final_eval.loss);
    report->losses = std::move(losses);
    report->accuracy = final_eval.accuracy;
    report->epochs_run = options.epochs;
  }
  return params;
}

QaModel train_qa_model(std::span<const TrainExample> examples, const QaTrainOptions& options, QaTrainReport* report) {
  {
    bool pos = false, neg = false;
    for (const auto& e : examples) (e.label ? pos : neg) = true;
    if (!pos || !neg) throw DegenerateLabels("training pairs need both labels");
  }
  QaTrainReport local;
  QaTrainReport& rep = report ? *report : local;
  QaModel model = QaModel::init(options.seed);
  const QaEncoder& enc = shared_encoder(model.seed);

  auto distinct_labels = [](const std::vector<NodeGraph>& gs) {
    std::set<int> s;
    for (const auto& g : gs) s.insert(g.labels.begin(), g.labels.end());
    return s.size();
  };
  if (options.pretrain.epochs > 0) {
    std::vector<NodeGraph> lines, texts;
    std::set<std::string> seen_messages;
    for (const auto& e : examples) {
      lines.push_back(enc.line_graph(e.delta));
      if (seen_messages.insert(e.message).second) texts.push_back(enc.text_graph(e.message));
    }
    if (distinct_labels(lines) >= 2) {
      model.code_gcn = gcn_pretrain(lines, model.code_gcn, options.pretrain, &rep.code_pretrain);
    }
    if (distinct_labels(texts) >= 2) {
      model.text_gcn = gcn_pretrain(texts, model.text_gcn, options.pretrain, &rep.text_pretrain);
    } else {
      rep.text_pretrain_skipped = true;
    }
  }
  const auto encoded = encode_examples(examples, model);
  model.scorer = train_scorer(encoded, model.scorer, options.scorer, &rep.scorer);
  return model;
}

GradCheckReport grad_check(const ScorerParams& params_in, const EncodedExample& example,
                           const GradCheckOptions& options) {
  if (!(options.epsilon >= 1e-6 && options.epsilon <= 1e-4)) {
    throw std::invalid_argument("grad_check epsilon must lie in [1e-6, 1e-4]");
  }
  ScorerParams params = params_in;
  std::vector<Matrix> grads = zero_grads(params);
  pair_forward(example.code, example.text, example.label, params, &grads);
  if (options.negate_analytic) {
    for (auto& g : grads) g = -g;
  }

  const TensorList tensors = params.tensors();
  std::vector<std::size_t> offsets{0};
  for (const auto& [n, t] : tensors) offsets.push_back(offsets.back() + static_cast<std::size_t>(t->size()));
  const std::size_t total = offsets.back();
  const auto wanted = static_cast<std::size_t>(
      std::clamp(std::ceil(options.sample_fraction * static_cast<double>(total)), 1.0, static_cast<double>(total)));

  // Floyd's sampling of distinct flat indices.
  std::mt19937_64 gen(mix64(options.seed ^ 0x9c4c));
  std::set<std::size_t> sample;
  for (std::size_t j = total - wanted; j < total; ++j) {
    const std::size_t r = gen() % (j + 1);
    if (!sample.insert(r).second) sample.insert(j);
  }

  GradCheckReport rep;
  for (std::size_t flat : sample) {
    const auto t = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), flat) - offsets.begin() - 1);
    const std::size_t off = flat - offsets[t];
    double& w = tensors[t].second->data()[off];
    const double orig = w;
    w = orig + options.epsilon;
    const double lp = pair_forward(example.code, example.text, example.label, params).loss;
    w = orig - options.epsilon;
    const double lm = pair_forward(example.code, example.text, example.label, params).loss;
    w = orig;
    const double numeric = (lp - lm) / (2.0 * options.epsilon);
    const double analytic = grads[t].data()[off];
    if (!std::isfinite(numeric) || !std::isfinite(analytic)) rep.finite = false;
    const double denom = std::max({std::abs(analytic), std::abs(numeric), options.denominator_floor});
    const double rel = std::abs(analytic - numeric) / denom;
    if (rel > rep.max_relative_error || rep.checked == 0) {
      rep.max_relative_error = rel;
      rep.worst_parameter = tensors[t].first + "[" + std::to_string(off) + "]";
    }
    ++rep.checked;
  }
  return rep;
}

namespace {

constexpr char kMagic[4] = {'D', 'M', 'Q', 'A'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  std::uint64_t uint(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw FormatError("checkpoint", "truncated file");
  }
  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const QaModel& model) {
  model.check();
  std::string out(kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u64(out, model.seed);
  const auto tensors = model_tensors(model);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(t->rows()));
    put_u32(out, static_cast<std::uint32_t>(t->cols()));
    for (Eigen::Index i = 0; i < t->size(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(t->data()[i]));
  }
  return out;
}

QaModel deserialize_model(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(4) != std::string_view(kMagic, 4)) throw FormatError("checkpoint", "bad magic");
  const auto version = r.uint(4);
  if (version != kFormatVersion) throw FormatError("checkpoint", "unsupported version " + std::to_string(version));
  QaModel m;
  m.seed = r.uint(8);
  const auto count = r.uint(4);
  std::map<std::string, Matrix*> slots;
  for (auto& [name, t] : model_tensors(m)) slots.emplace(name, t);
  std::set<std::string> filled;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string name(r.bytes(r.uint(4)));
    auto it = slots.find(name);
    if (it == slots.end()) throw FormatError("checkpoint." + name, "unknown tensor");
    if (!filled.insert(name).second) throw FormatError("checkpoint." + name, "duplicate tensor");
    const auto rows = static_cast<Eigen::Index>(r.uint(4));
    const auto cols = static_cast<Eigen::Index>(r.uint(4));
    Matrix& t = *it->second;
    t.resize(rows, cols);
    for (Eigen::Index k = 0; k < t.size(); ++k) t.data()[k] = std::bit_cast<double>(r.uint(8));
  }
  if (filled.size() != slots.size()) throw FormatError("checkpoint", "missing tensors");
  if (!r.done()) throw FormatError("checkpoint", "trailing bytes");
  try {
    m.check();
  } catch (const ShapeError& e) {
    throw FormatError("checkpoint", e.what());
  }
  return m;
}

void save_checkpoint(const QaModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

QaModel load_checkpoint(const std::filesystem::path& path) { return deserialize_model(read_text_file(path)); }

std::vector<TrainExample> parse_train_examples(std::string_view text) {
  std::vector<TrainExample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FormatError(where, "not a JSON object");
    for (const char* key : {"delta", "message", "label"}) {
      if (!j.contains(key)) throw FormatError(where + "." + key, "missing");
    }
    if (!j["message"].is_string()) throw FormatError(where + ".message", "must be a string");
    if (!j["label"].is_number_integer() || (j["label"] != 0 && j["label"] != 1)) {
      throw FormatError(where + ".label", "must be 0 or 1");
    }
    TrainExample e;
    try {
      e.delta = delta::import_delta_json(j["delta"].is_string() ? j["delta"].get<std::string>() : j["delta"].dump());
    } catch (const FormatError& err) {
      throw FormatError(where + ".delta", err.what());
    }
    e.message = j["message"].get<std::string>();
    e.label = j["label"].get<int>();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<TrainExample> load_train_examples(const std::filesystem::path& path) {
  return parse_train_examples(read_text_file(path));
}

std::string train_example_to_jsonl(const TrainExample& example) {
  nlohmann::ordered_json j;
  j["delta"] = nlohmann::ordered_json::parse(delta::export_delta_json(example.delta));
  j["message"] = example.message;
  j["label"] = example.label;
  return j.dump();
}

}  // namespace deltamsg::qa
