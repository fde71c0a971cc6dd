#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>

#include "deltamsg/cpg/graph.hpp"

namespace deltamsg::delta {

using cpg::CpgEdge;
using cpg::CpgGraph;
using cpg::CpgVertex;
using cpg::EdgeSet;
using cpg::VertexKey;
using cpg::VertexMap;

// An edge set together with a vertex set; used for the common, added and
// deleted parts of a version pair.
struct SubGraph {
  EdgeSet edges;
  VertexMap vertices;

  friend bool operator==(const SubGraph& a, const SubGraph& b) {
    return a.edges == b.edges && a.vertices.size() == b.vertices.size() &&
           std::equal(a.vertices.begin(), a.vertices.end(), b.vertices.begin(),
                      [](const auto& x, const auto& y) { return x.first == y.first; });
  }
};

using GraphUnion = SubGraph;

enum class DeltaClass { Added, Deleted, Context };
std::string_view to_string(DeltaClass c);

// Change representation of a version pair: added and deleted edges/vertices
// plus the common edges that touch a changed edge. The three edge sets are
// pairwise disjoint; context vertices are the common endpoints of any kept
// edge.
struct DeltaGraph {
  EdgeSet added_edges;
  EdgeSet deleted_edges;
  EdgeSet context_edges;
  VertexMap added_vertices;
  VertexMap deleted_vertices;
  VertexMap context_vertices;

  bool empty() const noexcept;
  std::size_t edge_count() const noexcept {
    return added_edges.size() + deleted_edges.size() + context_edges.size();
  }
  const CpgVertex* find_vertex(const VertexKey& key) const;

  // Throws IntegrityError if any structural invariant is broken.
  void validate() const;
};

// Vertex identity is the VertexKey, edge identity (src, dst, type, label).
// Vertex payloads (line numbers) come from the newer version where both
// carry the vertex.
SubGraph common_graph(const CpgGraph& old_version, const CpgGraph& new_version);
SubGraph deleted_graph(const CpgGraph& old_version, const CpgGraph& new_version);
SubGraph added_graph(const CpgGraph& old_version, const CpgGraph& new_version);
GraphUnion graph_union(const CpgGraph& old_version, const CpgGraph& new_version);

// Common edges sharing at least one endpoint with an added or deleted edge.
// One hop only.
EdgeSet restrict_context(const EdgeSet& common, const EdgeSet& added, const EdgeSet& deleted);

DeltaGraph build_delta(const CpgGraph& old_version, const CpgGraph& new_version);

// Same interchange layout as a CPG, with an extra "delta_class" string
// ("added" | "deleted" | "context") on every vertex and edge.
std::string export_delta_json(const DeltaGraph& delta);
// Throws FormatError / IntegrityError.
DeltaGraph import_delta_json(std::string_view text);

}  // namespace deltamsg::delta
