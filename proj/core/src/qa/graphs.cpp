#include "deltamsg/qa/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "deltamsg/corpus/filter.hpp"
#include "deltamsg/delta/linearize.hpp"
#include "deltamsg/metrics/metrics.hpp"

namespace deltamsg::qa {

Matrix normalized_adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const auto sn = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Identity(sn, sn);
  for (const auto& [i, j] : edges) {
    if (i == j) continue;
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  }
  const Vector inv_sqrt = a.rowwise().sum().array().rsqrt();
  return inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
}

namespace {

void append_code(std::vector<std::string>& out, const cpg::CpgVertex* v) {
  if (v == nullptr) return;
  std::istringstream in(v->code);
  std::string piece;
  while (in >> piece) out.push_back(piece);
}

}  // namespace

std::vector<std::string> edge_tokens(const delta::DeltaGraph& delta, const cpg::CpgEdge& e) {
  std::vector<std::string> out;
  append_code(out, delta.find_vertex(e.src));
  out.emplace_back(cpg::to_string(e.type));
  if (!e.label.empty()) out.push_back(e.label);
  append_code(out, delta.find_vertex(e.dst));
  return out;
}

std::vector<const cpg::CpgEdge*> line_graph_order(const delta::DeltaGraph& delta) {
  std::map<cpg::VertexKey, std::size_t> rank;
  auto rank_block = [&](const cpg::VertexMap& vs, const cpg::EdgeSet& es) {
    for (const auto* v : delta::ordered_vertices(vs, es)) rank.emplace(v->key, rank.size());
  };
  rank_block(delta.added_vertices, delta.added_edges);
  rank_block(delta.deleted_vertices, delta.deleted_edges);
  rank_block(delta.context_vertices, delta.context_edges);
  auto r = [&](const cpg::VertexKey& k) {
    auto it = rank.find(k);
    return it == rank.end() ? rank.size() : it->second;
  };

  std::vector<const cpg::CpgEdge*> out;
  for (const auto* es : {&delta.added_edges, &delta.deleted_edges, &delta.context_edges}) {
    const std::size_t begin = out.size();
    for (const auto& e : *es) out.push_back(&e);
    std::stable_sort(out.begin() + static_cast<std::ptrdiff_t>(begin), out.end(),
                     [&](const cpg::CpgEdge* a, const cpg::CpgEdge* b) {
                       return std::make_tuple(r(a->src), r(a->dst), a->type) <
                              std::make_tuple(r(b->src), r(b->dst), b->type);
                     });
  }
  return out;
}

NodeGraph build_line_graph(const delta::DeltaGraph& delta, const TokenEmbedder& embedder) {
  const auto edges = line_graph_order(delta);
  NodeGraph g;
  g.features.resize(static_cast<Eigen::Index>(edges.size()), kEmbedDim);
  std::map<cpg::VertexKey, std::vector<std::size_t>> incident;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = *edges[i];
    g.features.row(static_cast<Eigen::Index>(i)) = embedder.embed(edge_tokens(delta, e)).transpose();
    incident[e.src].push_back(i);
    if (e.dst != e.src) incident[e.dst].push_back(i);
    g.labels.push_back(delta.added_edges.count(e)     ? kEdgeAdded
                       : delta.deleted_edges.count(e) ? kEdgeDeleted
                                                      : kEdgeCommon);
  }
  std::set<std::pair<std::size_t, std::size_t>> adj;
  for (const auto& [key, nodes] : incident) {
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        adj.emplace(std::min(nodes[a], nodes[b]), std::max(nodes[a], nodes[b]));
      }
    }
  }
  g.adjacency.assign(adj.begin(), adj.end());
  return g;
}

std::vector<std::string> message_words(std::string_view message) {
  std::vector<std::string> out;
  for (auto& t : metrics::tokenize(message)) {
    if (!(t.size() == 1 && std::ispunct(static_cast<unsigned char>(t[0])))) out.push_back(std::move(t));
  }
  return out;
}

ChainTextGraphBuilder::ChainTextGraphBuilder() : verbs_(corpus::default_verb_lexicon()) {}

NodeGraph ChainTextGraphBuilder::build(std::string_view message, const TokenEmbedder& embedder) const {
  const auto words = message_words(message);
  NodeGraph g;
  const std::size_t n = words.size() > 1 ? words.size() - 1 : 0;
  g.features.resize(static_cast<Eigen::Index>(n), kEmbedDim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string pair[] = {words[i], words[i + 1]};
    g.features.row(static_cast<Eigen::Index>(i)) = embedder.embed(pair).transpose();
    g.labels.push_back(verbs_.count(words[i + 1]) ? kWordVerb : kWordOther);
    if (i + 1 < n) g.adjacency.emplace_back(i, i + 1);
  }
  return g;
}

}  // namespace deltamsg::qa
