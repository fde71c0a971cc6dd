#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace deltamsg::cpg {

enum class VertexKind : std::uint8_t {
  Class,
  Method,
  Param,
  Decl,
  Assign,
  If,
  While,
  Return,
  Call,
  BinOp,
  Ident,
  Literal,
  FieldAccess,
  Block,
  Condition,
};

enum class EdgeType : std::uint8_t { Ast, Cfg, PdgData, PdgCtrl };

std::string_view to_string(VertexKind kind);
std::string_view to_string(EdgeType type);
std::optional<VertexKind> parse_vertex_kind(std::string_view text);
std::optional<EdgeType> parse_edge_type(std::string_view text);

// Leaf kinds must carry non-empty code.
bool is_leaf_kind(VertexKind kind);

// Kinds that appear as nodes of the control flow graph.
bool is_statement_kind(VertexKind kind);

// Stable identity of a vertex across program versions. Derived from
// (kind, code, enclosing signature, ordinal) only, never from line numbers,
// so reformatting a file does not move any key.
struct VertexKey {
  std::uint64_t digest = 0;

  static VertexKey make(VertexKind kind, std::string_view code, std::string_view signature,
                        int ordinal);

  std::string hex() const;

  friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
};

struct CpgVertex {
  VertexKey key;
  VertexKind kind = VertexKind::Ident;
  std::string code;
  // Enclosing method signature ("Class.method(T1,T2)"), or the class name for
  // class-level vertices.
  std::string signature;
  int line = 0;
  int ordinal = 0;

  friend bool operator==(const CpgVertex&, const CpgVertex&) = default;
};

struct CpgEdge {
  VertexKey src;
  VertexKey dst;
  EdgeType type = EdgeType::Ast;
  std::string label;

  friend auto operator<=>(const CpgEdge&, const CpgEdge&) = default;
};

using VertexMap = std::map<VertexKey, CpgVertex>;
using EdgeSet = std::set<CpgEdge>;

// Code property graph of one program version: AST, CFG and PDG edges over a
// shared vertex set. Mutation goes through add_vertex/add_edge, which enforce
// the endpoint and key-uniqueness invariants; validate() checks the global
// ones (AST forest, no CFG/PDG self loops).
class CpgGraph {
 public:
  CpgGraph() = default;
  explicit CpgGraph(std::string origin) : origin_(std::move(origin)) {}

  // Returns the key. Re-adding an identical vertex is a no-op; a different
  // vertex with the same key (hash collision or duplicate tuple) throws
  // IntegrityError.
  VertexKey add_vertex(CpgVertex vertex);
  // Throws IntegrityError on dangling endpoints or CFG/PDG self loops.
  void add_edge(CpgEdge edge);

  const VertexMap& vertices() const noexcept { return vertices_; }
  const EdgeSet& edges() const noexcept { return edges_; }
  const std::string& origin() const noexcept { return origin_; }
  void set_origin(std::string origin) { origin_ = std::move(origin); }

  const CpgVertex* find(const VertexKey& key) const;
  bool contains(const VertexKey& key) const { return vertices_.count(key) != 0; }
  bool empty() const noexcept { return vertices_.empty() && edges_.empty(); }

  std::vector<CpgEdge> edges_of_type(EdgeType type) const;

  void validate() const;

  // Set equality of vertices and edges; origin is not compared.
  friend bool operator==(const CpgGraph& a, const CpgGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  VertexMap vertices_;
  EdgeSet edges_;
  std::string origin_;
};

// Collapse runs of whitespace to a single space and trim both ends.
std::string normalize_code(std::string_view text);

}  // namespace deltamsg::cpg
