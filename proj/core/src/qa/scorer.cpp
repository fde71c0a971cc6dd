#include "deltamsg/qa/scorer.hpp"

#include <cmath>

#include "deltamsg/errors.hpp"
#include "deltamsg/hash.hpp"

namespace deltamsg::qa {

ScorerParams ScorerParams::init(std::uint64_t seed) {
  ScorerParams p;
  for (std::size_t k = 0; k < kConvWidths.size(); ++k) {
    const Eigen::Index fan_in = kConvWidths[k] * kGcnHidden;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    p.conv[k] = seeded_uniform(kConvFilters, fan_in, bound, mix64(seed ^ (0x21 + k)));
    p.conv_bias[k] = seeded_uniform(1, kConvFilters, bound, mix64(seed ^ (0x31 + k)));
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(kPooledDim));
  p.dense = seeded_uniform(kScorerOut, kPooledDim, bound, mix64(seed ^ 0x41));
  p.dense_bias = seeded_uniform(kScorerOut, 1, bound, mix64(seed ^ 0x42));
  return p;
}

void ScorerParams::check() const {
  for (std::size_t k = 0; k < kConvWidths.size(); ++k) {
    require_shape(conv[k], kConvFilters, kConvWidths[k] * kGcnHidden, "scorer.conv" + std::to_string(k));
    require_shape(conv_bias[k], 1, kConvFilters, "scorer.conv_bias" + std::to_string(k));
  }
  require_shape(dense, kScorerOut, kPooledDim, "scorer.dense");
  require_shape(dense_bias, kScorerOut, 1, "scorer.dense_bias");
}

TensorList ScorerParams::tensors() {
  return {{"conv0", &conv[0]},           {"conv1", &conv[1]},           {"conv2", &conv[2]},
          {"conv_bias0", &conv_bias[0]}, {"conv_bias1", &conv_bias[1]}, {"conv_bias2", &conv_bias[2]},
          {"dense", &dense},             {"dense_bias", &dense_bias}};
}

ConstTensorList ScorerParams::tensors() const {
  return {{"conv0", &conv[0]},           {"conv1", &conv[1]},           {"conv2", &conv[2]},
          {"conv_bias0", &conv_bias[0]}, {"conv_bias1", &conv_bias[1]}, {"conv_bias2", &conv_bias[2]},
          {"dense", &dense},             {"dense_bias", &dense_bias}};
}

std::size_t ScorerParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors()) n += static_cast<std::size_t>(t->size());
  return n;
}

std::vector<Matrix> zero_grads(const ScorerParams& p) {
  std::vector<Matrix> g;
  for (const auto& [name, t] : p.tensors()) g.push_back(Matrix::Zero(t->rows(), t->cols()));
  return g;
}

Matrix pad_sequence(const Matrix& seq) {
  if (seq.rows() > 0) require_shape(seq, seq.rows(), kGcnHidden, "scorer input");
  if (seq.rows() >= kMinSequence) return seq;
  Matrix out = Matrix::Zero(kMinSequence, kGcnHidden);
  if (seq.rows() > 0) out.topRows(seq.rows()) = seq;
  return out;
}

Vector scorer_forward(const Matrix& seq_in, const ScorerParams& p, ScorerCache* cache) {
  p.check();
  const Matrix seq = pad_sequence(seq_in);
  ScorerCache local;
  ScorerCache& c = cache ? *cache : local;
  c.pooled.resize(kPooledDim);
  for (std::size_t k = 0; k < kConvWidths.size(); ++k) {
    const Eigen::Index w = kConvWidths[k];
    const Eigen::Index positions = seq.rows() - w + 1;
    Matrix& win = c.windows[k];
    win.resize(positions, w * kGcnHidden);
    for (Eigen::Index t = 0; t < positions; ++t) {
      for (Eigen::Index j = 0; j < w; ++j) win.block(t, j * kGcnHidden, 1, kGcnHidden) = seq.row(t + j);
    }
    Matrix& pre = c.pre[k];
    pre.noalias() = win * p.conv[k].transpose();
    pre.rowwise() += p.conv_bias[k].row(0);
    c.argmax[k].assign(static_cast<std::size_t>(kConvFilters), 0);
    for (Eigen::Index f = 0; f < kConvFilters; ++f) {
      Eigen::Index arg = 0;
      const double mx = pre.col(f).maxCoeff(&arg);
      c.argmax[k][static_cast<std::size_t>(f)] = arg;
      c.pooled(static_cast<Eigen::Index>(k) * kConvFilters + f) = mx > 0.0 ? mx : 0.0;
    }
  }
  return p.dense * c.pooled + p.dense_bias.col(0);
}

void scorer_backward(const ScorerCache& c, const Vector& d_out, const ScorerParams& p, std::vector<Matrix>& grads) {
  if (grads.size() != 8) throw ShapeError("scorer gradient list has wrong length");
  grads[6].noalias() += d_out * c.pooled.transpose();
  grads[7].col(0) += d_out;
  const Vector d_pooled = p.dense.transpose() * d_out;
  for (std::size_t k = 0; k < kConvWidths.size(); ++k) {
    for (Eigen::Index f = 0; f < kConvFilters; ++f) {
      const Eigen::Index t = c.argmax[k][static_cast<std::size_t>(f)];
      if (c.pre[k](t, f) <= 0.0) continue;
      const double g = d_pooled(static_cast<Eigen::Index>(k) * kConvFilters + f);
      grads[k].row(f) += g * c.windows[k].row(t);
      grads[3 + k](0, f) += g;
    }
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double score_from_distance(double d, ScoreMode mode) {
  return mode == ScoreMode::PaperLiteral ? sigmoid(d) : sigmoid(-d);
}

namespace {

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

PairOutput pair_forward(const Matrix& code_seq, const Matrix& text_seq, int label, const ScorerParams& p,
                        std::vector<Matrix>* grads) {
  ScorerCache cp, cq;
  const Vector pv = scorer_forward(code_seq, p, &cp);
  const Vector qv = scorer_forward(text_seq, p, &cq);
  const Vector diff = pv - qv;
  PairOutput out;
  out.distance = diff.norm();
  const double z = -out.distance;
  out.score = sigmoid(z);
  const double y = label ? 1.0 : 0.0;
  out.loss = softplus(z) - y * z;
  if (grads != nullptr && out.distance > 0.0) {
    const double d_distance = -(out.score - y);
    const Vector d_p = (d_distance / out.distance) * diff;
    scorer_backward(cp, d_p, p, *grads);
    scorer_backward(cq, -d_p, p, *grads);
  }
  return out;
}

}  // namespace deltamsg::qa
