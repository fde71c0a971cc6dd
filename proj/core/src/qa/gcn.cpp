#include "deltamsg/qa/gcn.hpp"

#include <cmath>
#include <set>

#include "deltamsg/errors.hpp"
#include "deltamsg/hash.hpp"

namespace deltamsg::qa {

GcnParams GcnParams::init(Eigen::Index classes, std::uint64_t seed) {
  GcnParams p;
  p.w1 = seeded_uniform(kEmbedDim, kGcnHidden, 1.0 / std::sqrt(static_cast<double>(kEmbedDim)), mix64(seed ^ 0x11));
  p.w2 = seeded_uniform(kGcnHidden, kGcnHidden, 1.0 / std::sqrt(static_cast<double>(kGcnHidden)), mix64(seed ^ 0x12));
  p.head = seeded_uniform(kGcnHidden, classes, 1.0 / std::sqrt(static_cast<double>(kGcnHidden)),
                          mix64(seed ^ 0x13 ^ static_cast<std::uint64_t>(classes) << 8));
  p.head_bias = Matrix::Zero(1, classes);
  return p;
}

void GcnParams::check() const {
  require_shape(w1, kEmbedDim, kGcnHidden, "gcn.w1");
  require_shape(w2, kGcnHidden, kGcnHidden, "gcn.w2");
  if (head.rows() != kGcnHidden || head.cols() < 1) require_shape(head, kGcnHidden, 1, "gcn.head");
  require_shape(head_bias, 1, head.cols(), "gcn.head_bias");
}

TensorList GcnParams::tensors() {
  return {{"w1", &w1}, {"w2", &w2}, {"head", &head}, {"head_bias", &head_bias}};
}

ConstTensorList GcnParams::tensors() const {
  return {{"w1", &w1}, {"w2", &w2}, {"head", &head}, {"head_bias", &head_bias}};
}

Matrix gcn_forward(const Matrix& a_hat, const Matrix& x, const GcnParams& p) {
  p.check();
  require_shape(x, x.rows(), kEmbedDim, "gcn input");
  require_shape(a_hat, x.rows(), x.rows(), "normalized adjacency");
  const Matrix h1 = (a_hat * x * p.w1).cwiseMax(0.0);
  return (a_hat * h1 * p.w2).cwiseMax(0.0);
}

Matrix gcn_forward(const NodeGraph& graph, const GcnParams& p) {
  if (graph.size() == 0) throw EmptyGraph("graph has no nodes");
  return gcn_forward(normalized_adjacency(graph.size(), graph.adjacency), graph.features, p);
}

namespace {

struct Prepared {
  Matrix a_hat;
  Matrix ax;  // A_hat X, fixed during training
  std::vector<int> labels;
};

std::vector<Prepared> prepare(std::span<const NodeGraph> graphs, Eigen::Index classes, std::size_t* nodes) {
  std::vector<Prepared> out;
  *nodes = 0;
  for (const auto& g : graphs) {
    if (g.size() == 0) continue;
    if (g.labels.size() != g.size()) throw ShapeError("node label count differs from node count");
    for (int l : g.labels) {
      if (l < 0 || l >= classes) throw ShapeError("node label out of range");
    }
    Prepared p;
    p.a_hat = normalized_adjacency(g.size(), g.adjacency);
    p.ax = p.a_hat * g.features;
    p.labels = g.labels;
    *nodes += g.size();
    out.push_back(std::move(p));
  }
  if (*nodes == 0) throw EmptyGraph("no nodes to train on");
  return out;
}

// Mean cross-entropy; accumulates gradients into `grads` (same order as
// GcnParams::tensors) when non-null.
double loss_and_grad(const std::vector<Prepared>& data, std::size_t nodes, const GcnParams& p,
                     std::vector<Matrix>* grads, double* accuracy) {
  double loss = 0.0;
  std::size_t correct = 0;
  const double scale = 1.0 / static_cast<double>(nodes);
  for (const auto& g : data) {
    const Matrix z1 = g.ax * p.w1;
    const Matrix h1 = z1.cwiseMax(0.0);
    const Matrix ah1 = g.a_hat * h1;
    const Matrix z2 = ah1 * p.w2;
    const Matrix h2 = z2.cwiseMax(0.0);
    Matrix logits = h2 * p.head;
    logits.rowwise() += p.head_bias.row(0);
    Matrix dlogits(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
      const double mx = logits.row(i).maxCoeff();
      const Eigen::RowVectorXd e = (logits.row(i).array() - mx).exp().matrix();
      const double s = e.sum();
      const int y = g.labels[static_cast<std::size_t>(i)];
      loss -= (logits(i, y) - mx - std::log(s)) * scale;
      Eigen::Index arg;
      logits.row(i).maxCoeff(&arg);
      correct += arg == y;
      dlogits.row(i) = e / s * scale;
      dlogits(i, y) -= scale;
    }
    if (grads == nullptr) continue;
    auto& gw1 = (*grads)[0];
    auto& gw2 = (*grads)[1];
    auto& ghead = (*grads)[2];
    auto& gbias = (*grads)[3];
    ghead += h2.transpose() * dlogits;
    gbias += dlogits.colwise().sum();
    const Matrix dz2 = (dlogits * p.head.transpose()).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
    gw2 += ah1.transpose() * dz2;
    const Matrix dh1 = g.a_hat.transpose() * dz2 * p.w2.transpose();
    const Matrix dz1 = dh1.cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
    gw1 += g.ax.transpose() * dz1;
  }
  if (accuracy) *accuracy = static_cast<double>(correct) / static_cast<double>(nodes);
  return loss;
}

}  // namespace

double gcn_loss(std::span<const NodeGraph> graphs, const GcnParams& p, double* accuracy) {
  p.check();
  std::size_t nodes = 0;
  const auto data = prepare(graphs, p.classes(), &nodes);
  return loss_and_grad(data, nodes, p, nullptr, accuracy);
}

GcnParams gcn_pretrain(std::span<const NodeGraph> graphs, GcnParams params, const PretrainOptions& options,
                       PretrainReport* report) {
  params.check();
  std::set<int> seen;
  for (const auto& g : graphs) seen.insert(g.labels.begin(), g.labels.end());
  if (seen.size() < 2) throw DegenerateLabels("node labels contain a single class");
  std::size_t nodes = 0;
  const auto data = prepare(graphs, params.classes(), &nodes);

  OptimizerState opt(options.optimizer);
  std::vector<double> losses;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::vector<Matrix> grads;
    for (const auto& [name, t] : params.tensors()) grads.push_back(Matrix::Zero(t->rows(), t->cols()));
    losses.push_back(loss_and_grad(data, nodes, params, &grads, nullptr));
    std::vector<const Matrix*> gp;
    for (const auto& g : grads) gp.push_back(&g);
    opt.step(params.tensors(), gp, options.lr);
  }
  double acc = 0.0;
  losses.push_back(loss_and_grad(data, nodes, params, nullptr, &acc));
  if (report) {
    report->losses = std::move(losses);
    report->accuracy = acc;
  }
  return params;
}

}  // namespace deltamsg::qa
