#include "deltamsg/qa/tensor.hpp"

#include <cmath>
#include <random>

#include "deltamsg/errors.hpp"

namespace deltamsg::qa {

Matrix seeded_uniform(Eigen::Index rows, Eigen::Index cols, double bound, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      m(r, c) = (2.0 * u - 1.0) * bound;
    }
  }
  return m;
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

void OptimizerState::step(const TensorList& params, const std::vector<const Matrix*>& grads, double lr) {
  if (params.size() != grads.size()) throw ShapeError("optimizer: parameter/gradient count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_shape(*grads[i], params[i].second->rows(), params[i].second->cols(), "gradient " + params[i].first);
  }
  if (kind_ == Optimizer::Sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) *params[i].second -= lr * *grads[i];
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (m_.empty()) {
    for (const auto& [name, p] : params) {
      m_.push_back(Matrix::Zero(p->rows(), p->cols()));
      v_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix& g = *grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g.cwiseProduct(g);
    *params[i].second -= (lr * (m_[i] / c1).array() / ((v_[i] / c2).array().sqrt() + eps)).matrix();
  }
}

}  // namespace deltamsg::qa
