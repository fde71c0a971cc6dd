#include "deltamsg/cpg/graph.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <functional>
#include <utility>

#include "deltamsg/errors.hpp"

namespace deltamsg::cpg {

namespace {

constexpr std::array<std::pair<VertexKind, std::string_view>, 15> kKindNames{{
    {VertexKind::Class, "CLASS"},
    {VertexKind::Method, "METHOD"},
    {VertexKind::Param, "PARAM"},
    {VertexKind::Decl, "DECL"},
    {VertexKind::Assign, "ASSIGN"},
    {VertexKind::If, "IF"},
    {VertexKind::While, "WHILE"},
    {VertexKind::Return, "RETURN"},
    {VertexKind::Call, "CALL"},
    {VertexKind::BinOp, "BINOP"},
    {VertexKind::Ident, "IDENT"},
    {VertexKind::Literal, "LITERAL"},
    {VertexKind::FieldAccess, "FIELD_ACCESS"},
    {VertexKind::Block, "BLOCK"},
    {VertexKind::Condition, "CONDITION"},
}};

constexpr std::array<std::pair<EdgeType, std::string_view>, 4> kEdgeNames{{
    {EdgeType::Ast, "AST"},
    {EdgeType::Cfg, "CFG"},
    {EdgeType::PdgData, "PDG_DATA"},
    {EdgeType::PdgCtrl, "PDG_CTRL"},
}};

// FNV-1a, 64 bit. Fields are length-prefixed so ("ab","c") and ("a","bc")
// never collide structurally.
class Fnv1a {
 public:
  void bytes(std::string_view s) {
    for (unsigned char c : s) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
  }
  void field(std::string_view s) {
    number(s.size());
    bytes(s);
  }
  void number(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<unsigned char>(v >> (8 * i));
      state_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string edge_repr(const CpgEdge& e) {
  return e.src.hex() + "->" + e.dst.hex() + " " + std::string(to_string(e.type));
}

}  // namespace

std::string_view to_string(VertexKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::string_view to_string(EdgeType type) {
  for (const auto& [t, name] : kEdgeNames) {
    if (t == type) return name;
  }
  return "?";
}

std::optional<VertexKind> parse_vertex_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::optional<EdgeType> parse_edge_type(std::string_view text) {
  for (const auto& [t, name] : kEdgeNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

bool is_leaf_kind(VertexKind kind) {
  return kind == VertexKind::Ident || kind == VertexKind::Literal;
}

bool is_statement_kind(VertexKind kind) {
  switch (kind) {
    case VertexKind::Decl:
    case VertexKind::Assign:
    case VertexKind::If:
    case VertexKind::While:
    case VertexKind::Return:
    case VertexKind::Call:
    case VertexKind::Block:
      return true;
    default:
      return false;
  }
}

VertexKey VertexKey::make(VertexKind kind, std::string_view code, std::string_view signature,
                          int ordinal) {
  Fnv1a h;
  h.number(static_cast<std::uint64_t>(kind));
  h.field(code);
  h.field(signature);
  h.number(static_cast<std::uint64_t>(ordinal));
  return VertexKey{h.value()};
}

std::string VertexKey::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

VertexKey CpgGraph::add_vertex(CpgVertex vertex) {
  if (vertex.ordinal < 0) {
    throw IntegrityError("vertex " + vertex.code + " has negative ordinal");
  }
  if (is_leaf_kind(vertex.kind) && vertex.code.empty()) {
    throw IntegrityError(std::string(to_string(vertex.kind)) + " vertex with empty code");
  }
  vertex.key = VertexKey::make(vertex.kind, vertex.code, vertex.signature, vertex.ordinal);
  auto [it, inserted] = vertices_.try_emplace(vertex.key, vertex);
  if (!inserted) {
    const CpgVertex& existing = it->second;
    if (existing.kind != vertex.kind || existing.code != vertex.code ||
        existing.signature != vertex.signature || existing.ordinal != vertex.ordinal) {
      throw IntegrityError("vertex key collision on " + vertex.key.hex());
    }
    if (existing.line != vertex.line) {
      throw IntegrityError("duplicate vertex " + std::string(to_string(vertex.kind)) + "(" +
                           vertex.code + ") in " + vertex.signature + " ordinal " +
                           std::to_string(vertex.ordinal));
    }
  }
  return vertex.key;
}

void CpgGraph::add_edge(CpgEdge edge) {
  if (!contains(edge.src) || !contains(edge.dst)) {
    throw IntegrityError("dangling edge endpoint: " + edge_repr(edge));
  }
  if (edge.type != EdgeType::Ast && edge.src == edge.dst) {
    throw IntegrityError("self loop on non-AST edge: " + edge_repr(edge));
  }
  edges_.insert(std::move(edge));
}

const CpgVertex* CpgGraph::find(const VertexKey& key) const {
  auto it = vertices_.find(key);
  return it == vertices_.end() ? nullptr : &it->second;
}

std::vector<CpgEdge> CpgGraph::edges_of_type(EdgeType type) const {
  std::vector<CpgEdge> out;
  for (const auto& e : edges_) {
    if (e.type == type) out.push_back(e);
  }
  return out;
}

void CpgGraph::validate() const {
  std::map<VertexKey, VertexKey> ast_parent;
  for (const auto& e : edges_) {
    if (!contains(e.src) || !contains(e.dst)) {
      throw IntegrityError("dangling edge endpoint: " + edge_repr(e));
    }
    if (e.type == EdgeType::Ast) {
      if (e.src == e.dst) throw IntegrityError("AST self loop: " + edge_repr(e));
      auto [it, inserted] = ast_parent.emplace(e.dst, e.src);
      if (!inserted) throw IntegrityError("vertex with two AST parents: " + e.dst.hex());
    } else if (e.src == e.dst) {
      throw IntegrityError("self loop on non-AST edge: " + edge_repr(e));
    }
  }
  // Each vertex has at most one parent, so walking parents either reaches a
  // root, a vertex already proven acyclic, or revisits the current walk.
  std::set<VertexKey> acyclic;
  for (const auto& entry : ast_parent) {
    std::set<VertexKey> walk;
    VertexKey cur = entry.first;
    while (!acyclic.count(cur)) {
      if (!walk.insert(cur).second) throw IntegrityError("AST edges contain a cycle");
      auto it = ast_parent.find(cur);
      if (it == ast_parent.end()) break;
      cur = it->second;
    }
    acyclic.insert(walk.begin(), walk.end());
  }
}

std::string normalize_code(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace deltamsg::cpg
