#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace deltamsg::qa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Named views over a parameter set, in a fixed order.
using TensorList = std::vector<std::pair<std::string, Matrix*>>;
using ConstTensorList = std::vector<std::pair<std::string, const Matrix*>>;

// Uniform in [-bound, bound] from a seeded generator; identical for a given
// (seed, shape) on every platform.
Matrix seeded_uniform(Eigen::Index rows, Eigen::Index cols, double bound, std::uint64_t seed);

// Throws ShapeError naming `what` unless m is rows x cols.
void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& what);

bool all_finite(const Matrix& m);

enum class Optimizer { Adam, Sgd };

class OptimizerState {
 public:
  explicit OptimizerState(Optimizer kind = Optimizer::Adam) : kind_(kind) {}
  // params[i] -= update(grads[i]); shapes must match pairwise.
  void step(const TensorList& params, const std::vector<const Matrix*>& grads, double lr);

 private:
  Optimizer kind_;
  std::vector<Matrix> m_, v_;
  long t_ = 0;
};

}  // namespace deltamsg::qa
