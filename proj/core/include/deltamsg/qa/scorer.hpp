#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "deltamsg/qa/gcn.hpp"
#include "deltamsg/qa/tensor.hpp"

namespace deltamsg::qa {

inline constexpr std::array<Eigen::Index, 3> kConvWidths = {2, 3, 4};
inline constexpr Eigen::Index kConvFilters = 64;
inline constexpr Eigen::Index kPooledDim = kConvFilters * 3;
inline constexpr Eigen::Index kScorerOut = 512;
inline constexpr Eigen::Index kMinSequence = 4;

// 1-D text-CNN over a node sequence (rows = positions, 256 channels): one
// filter bank per width, ReLU, max-pool over positions, then a dense map to
// 512. Used for both the code and the text side.
struct ScorerParams {
  std::array<Matrix, 3> conv;       // 64 x (width * 256)
  std::array<Matrix, 3> conv_bias;  // 1 x 64
  Matrix dense;                     // 512 x 192
  Matrix dense_bias;                // 512 x 1

  static ScorerParams init(std::uint64_t seed);
  void check() const;
  TensorList tensors();
  ConstTensorList tensors() const;
  std::size_t parameter_count() const;
};

struct ScorerCache {
  std::array<Matrix, 3> windows;  // im2col rows, T x (width * 256)
  std::array<Matrix, 3> pre;      // T x 64 before ReLU
  std::array<std::vector<Eigen::Index>, 3> argmax;
  Vector pooled;
};

// Sequences shorter than kMinSequence (including empty ones) are padded with
// zero rows at the end.
Matrix pad_sequence(const Matrix& seq);

Vector scorer_forward(const Matrix& seq, const ScorerParams& p, ScorerCache* cache = nullptr);

// Adds d(loss)/d(params) for one side, given d(loss)/d(output), to `grads`
// (ordered as ScorerParams::tensors()).
void scorer_backward(const ScorerCache& cache, const Vector& d_out, const ScorerParams& p,
                     std::vector<Matrix>& grads);

std::vector<Matrix> zero_grads(const ScorerParams& p);

enum class ScoreMode { Similarity, PaperLiteral };

double sigmoid(double x);
// Similarity: sigma(-d); PaperLiteral: sigma(d).
double score_from_distance(double d, ScoreMode mode);

struct PairOutput {
  double distance = 0.0;
  double score = 0.0;  // Similarity mode
  double loss = 0.0;   // binary cross-entropy of `score` against the label
};

// Forward pass for one (code, text) pair; with `grads` also accumulates the
// gradient of the loss, summing the contributions of both sides.
PairOutput pair_forward(const Matrix& code_seq, const Matrix& text_seq, int label, const ScorerParams& p,
                        std::vector<Matrix>* grads = nullptr);

}  // namespace deltamsg::qa
