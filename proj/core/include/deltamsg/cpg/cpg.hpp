#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "deltamsg/cpg/flow.hpp"
#include "deltamsg/cpg/graph.hpp"
#include "deltamsg/cpg/parser.hpp"

namespace deltamsg::cpg {

// Parses `unit` and merges AST, CFG and PDG edges over one vertex set.
// Deterministic; propagates SyntaxError / EmptyUnit.
CpgGraph build_cpg(const SourceUnit& unit);

// JSON interchange:
//   {"vertices": [{"kind","code","signature","ordinal","line"}, ...],
//    "edges":    [{"src_index","dst_index","etype","label"}, ...]}
// Indices are positions in the vertices array. Vertices are written in key
// order and edges in edge order, so equal graphs serialize identically.
std::string export_cpg_json(const CpgGraph& graph);

// Throws FormatError (with a field path such as "edges[2].etype") on schema
// violations, including unknown fields, and IntegrityError on dangling
// indices or broken graph invariants. Keys are recomputed from
// (kind, code, signature, ordinal).
CpgGraph import_cpg_json(std::string_view text);
CpgGraph import_cpg(const std::filesystem::path& path);

// Loads a program version from disk: ".json" files go through import_cpg,
// anything else is parsed as mini-Java.
CpgGraph load_version(const std::filesystem::path& path);

}  // namespace deltamsg::cpg
