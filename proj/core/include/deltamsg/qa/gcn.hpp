#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "deltamsg/qa/graphs.hpp"
#include "deltamsg/qa/tensor.hpp"

namespace deltamsg::qa {

inline constexpr Eigen::Index kGcnHidden = 256;

struct GcnParams {
  Matrix w1;         // kEmbedDim x 256
  Matrix w2;         // 256 x 256
  Matrix head;       // 256 x classes
  Matrix head_bias;  // 1 x classes

  Eigen::Index classes() const noexcept { return head.cols(); }
  // W1 and W2 depend only on the seed, so two stacks built from one seed
  // start in the same representation space.
  static GcnParams init(Eigen::Index classes, std::uint64_t seed);
  void check() const;
  TensorList tensors();
  ConstTensorList tensors() const;
};

// H1 = ReLU(A_hat X W1), H2 = ReLU(A_hat H1 W2); returns H2 (n x 256).
Matrix gcn_forward(const Matrix& a_hat, const Matrix& x, const GcnParams& p);
// Throws EmptyGraph for a graph without nodes.
Matrix gcn_forward(const NodeGraph& graph, const GcnParams& p);

struct PretrainOptions {
  int epochs = 50;
  double lr = 0.01;
  Optimizer optimizer = Optimizer::Adam;
};

struct PretrainReport {
  std::vector<double> losses;  // mean cross-entropy before each epoch, then final
  double accuracy = 0.0;       // node accuracy after training
};

// Full-batch node classification (softmax cross-entropy averaged over all
// nodes). Throws DegenerateLabels when fewer than two classes occur and
// EmptyGraph when there are no nodes.
GcnParams gcn_pretrain(std::span<const NodeGraph> graphs, GcnParams init, const PretrainOptions& options,
                       PretrainReport* report = nullptr);

// Loss and node accuracy without training.
double gcn_loss(std::span<const NodeGraph> graphs, const GcnParams& p, double* accuracy = nullptr);

}  // namespace deltamsg::qa
