#pragma once

#include <map>
#include <string>
#include <vector>

#include "deltamsg/cpg/graph.hpp"

namespace deltamsg::cpg {

inline constexpr const char* kMiniJava = "mini-java";

struct SourceUnit {
  std::string path;
  std::string text;
  std::string language = kMiniJava;
};

// AST-only view of one parsed unit. The graph holds AST vertices and edges;
// `children` keeps the source order of every AST child list, which the edge
// set alone cannot express and which the flow builders need.
//
// Child layout per kind:
//   CLASS     fields (DECL) and METHODs in source order
//   METHOD    PARAM*, then the body BLOCK (absent for abstract methods)
//   DECL      optional ASSIGN holding the initializer
//   ASSIGN    [FIELD_ACCESS target], value expression
//   IF        CONDITION, then-statement, [else-statement]
//   WHILE     CONDITION, body statement
//   RETURN    [expression]
//   CONDITION expression
//   BLOCK     statements
//   CALL      [receiver], arguments...
//   BINOP     left, right
//   FIELD_ACCESS  object
struct AstFragment {
  CpgGraph graph;
  std::map<VertexKey, std::vector<VertexKey>> children;
  std::vector<VertexKey> classes;
  std::vector<VertexKey> methods;

  const std::vector<VertexKey>& children_of(const VertexKey& key) const;
  const CpgVertex& vertex(const VertexKey& key) const;
};

// Parses a mini-Java unit: classes with fields and methods; statements are
// declarations, assignments, if/else, while, return, call statements and
// blocks; expressions are identifiers, int/string/char/boolean/null literals,
// binary operators, calls and field accesses. Comments are dropped.
//
// Throws SyntaxError (with line/column/token) on malformed input and
// EmptyUnit when the text declares no class.
AstFragment parse_source(const SourceUnit& unit);

}  // namespace deltamsg::cpg
