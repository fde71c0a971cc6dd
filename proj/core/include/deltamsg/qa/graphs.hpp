#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deltamsg/delta/delta.hpp"
#include "deltamsg/qa/embedding.hpp"

namespace deltamsg::qa {

// Node features (n x kEmbedDim), undirected adjacency (i < j) and one class
// label per node.
struct NodeGraph {
  Matrix features;
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;
  std::vector<int> labels;

  std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
};

// D^-1/2 (A + I) D^-1/2 as a dense n x n matrix.
Matrix normalized_adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

enum EdgeClass : int { kEdgeAdded = 0, kEdgeDeleted = 1, kEdgeCommon = 2 };
inline constexpr int kEdgeClasses = 3;

// Tokens describing one CPG edge: source code pieces, edge type, label,
// destination code pieces.
std::vector<std::string> edge_tokens(const delta::DeltaGraph& delta, const cpg::CpgEdge& e);

// One node per delta edge, added then deleted then context, each block in
// linearization order of its endpoints; nodes are adjacent when their edges
// share an endpoint vertex.
NodeGraph build_line_graph(const delta::DeltaGraph& delta, const TokenEmbedder& embedder);
std::vector<const cpg::CpgEdge*> line_graph_order(const delta::DeltaGraph& delta);

enum WordClass : int { kWordVerb = 0, kWordOther = 1 };
inline constexpr int kWordClasses = 2;

// Lowercased word tokens of a message with punctuation dropped.
std::vector<std::string> message_words(std::string_view message);

class TextGraphBuilder {
 public:
  virtual ~TextGraphBuilder() = default;
  virtual NodeGraph build(std::string_view message, const TokenEmbedder& embedder) const = 0;
};

// Nodes are adjacent word pairs (w_i, w_i+1); consecutive pairs are adjacent.
// A node is labelled by its second word: verb if in the lexicon.
class ChainTextGraphBuilder final : public TextGraphBuilder {
 public:
  ChainTextGraphBuilder();
  explicit ChainTextGraphBuilder(std::set<std::string> verbs) : verbs_(std::move(verbs)) {}
  NodeGraph build(std::string_view message, const TokenEmbedder& embedder) const override;

 private:
  std::set<std::string> verbs_;
};

}  // namespace deltamsg::qa
