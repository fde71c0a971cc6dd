#include "deltamsg/cpg/flow.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace deltamsg::cpg {

namespace {

// Appends the CFG nodes of `stmt` in source order, looking through
// non-empty blocks.
void flatten(const AstFragment& ast, const VertexKey& stmt, std::vector<VertexKey>& out) {
  const CpgVertex& v = ast.vertex(stmt);
  const auto& kids = ast.children_of(stmt);
  if (v.kind == VertexKind::Block && !kids.empty()) {
    for (const auto& k : kids) flatten(ast, k, out);
  } else {
    out.push_back(stmt);
  }
}

std::vector<VertexKey> flatten(const AstFragment& ast, const std::vector<VertexKey>& stmts) {
  std::vector<VertexKey> out;
  for (const auto& s : stmts) flatten(ast, s, out);
  return out;
}

const VertexKey* method_body(const AstFragment& ast, const VertexKey& method) {
  const auto& kids = ast.children_of(method);
  if (!kids.empty() && ast.vertex(kids.back()).kind == VertexKind::Block) return &kids.back();
  return nullptr;
}

class CfgBuilder {
 public:
  CfgBuilder(const AstFragment& ast, EdgeSet& edges) : ast_(ast), edges_(edges) {}

  // Wires `stmts` so that control leaves the sequence towards `next`;
  // returns the entry node (or `next` for an empty sequence).
  VertexKey sequence(const std::vector<VertexKey>& stmts, VertexKey next) {
    std::vector<VertexKey> nodes = flatten(ast_, stmts);
    VertexKey cur = next;
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) cur = node(*it, cur);
    return cur;
  }

 private:
  VertexKey branch(const VertexKey& stmt, VertexKey next) { return sequence({stmt}, next); }

  VertexKey node(const VertexKey& key, VertexKey next) {
    const CpgVertex& v = ast_.vertex(key);
    const auto& kids = ast_.children_of(key);
    switch (v.kind) {
      case VertexKind::Return:
        break;
      case VertexKind::If: {
        VertexKey then_entry = branch(kids.at(1), next);
        VertexKey else_entry = kids.size() > 2 ? branch(kids[2], next) : next;
        add(key, then_entry, "true");
        add(key, else_entry, "false");
        break;
      }
      case VertexKind::While: {
        VertexKey body_entry = branch(kids.at(1), key);
        add(key, body_entry, "true");
        add(key, next, "false");
        break;
      }
      default:
        add(key, next, "");
        break;
    }
    return key;
  }

  void add(const VertexKey& src, const VertexKey& dst, std::string label) {
    edges_.insert(CpgEdge{src, dst, EdgeType::Cfg, std::move(label)});
  }

  const AstFragment& ast_;
  EdgeSet& edges_;
};

void collect_idents(const AstFragment& ast, const VertexKey& key, std::set<std::string>& out) {
  const CpgVertex& v = ast.vertex(key);
  if (v.kind == VertexKind::Ident && v.code != "this") out.insert(v.code);
  for (const auto& k : ast.children_of(key)) collect_idents(ast, k, out);
}

// Variables read by a CFG node, excluding nested statements.
std::set<std::string> uses_of(const AstFragment& ast, const VertexKey& key) {
  std::set<std::string> out;
  const CpgVertex& v = ast.vertex(key);
  const auto& kids = ast.children_of(key);
  switch (v.kind) {
    case VertexKind::If:
    case VertexKind::While:
      collect_idents(ast, kids.at(0), out);
      break;
    case VertexKind::Block:
      break;
    default:
      for (const auto& k : kids) collect_idents(ast, k, out);
      break;
  }
  return out;
}

bool is_plain_name(const std::string& code) {
  return !code.empty() && code.find('.') == std::string::npos;
}

// Variable written by a CFG node, if any. Field targets are not tracked.
const std::string* def_of(const CpgVertex& v) {
  if (v.kind == VertexKind::Decl) return &v.code;
  if (v.kind == VertexKind::Assign && is_plain_name(v.code)) return &v.code;
  return nullptr;
}

void method_pdg(const AstFragment& ast, const VertexKey& method, const EdgeSet& cfg,
                EdgeSet& out) {
  const VertexKey* body = method_body(ast, method);
  if (!body) return;

  // All CFG nodes of the method, including those nested in branches.
  std::vector<VertexKey> nodes;
  std::vector<VertexKey> stack = flatten(ast, ast.children_of(*body));
  const VertexKey entry = stack.empty() ? method : stack.front();
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    VertexKey k = stack.back();
    stack.pop_back();
    nodes.push_back(k);
    const CpgVertex& v = ast.vertex(k);
    if (v.kind == VertexKind::If || v.kind == VertexKind::While) {
      const auto& kids = ast.children_of(k);
      std::vector<VertexKey> inner = flatten(ast, {kids.begin() + 1, kids.end()});
      stack.insert(stack.end(), inner.rbegin(), inner.rend());
    }
  }
  if (nodes.empty()) return;

  struct Def {
    VertexKey vertex;
    std::string var;
  };
  std::vector<Def> defs;
  std::vector<std::size_t> param_defs;
  for (const auto& k : ast.children_of(method)) {
    const CpgVertex& v = ast.vertex(k);
    if (v.kind == VertexKind::Param) {
      param_defs.push_back(defs.size());
      defs.push_back({k, v.code});
    }
  }
  std::map<VertexKey, std::size_t> index;
  std::vector<int> gen(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index[nodes[i]] = i;
    if (const std::string* var = def_of(ast.vertex(nodes[i]))) {
      gen[i] = static_cast<int>(defs.size());
      defs.push_back({nodes[i], *var});
    }
  }

  std::vector<std::vector<std::size_t>> preds(nodes.size());
  for (const auto& e : cfg) {
    auto s = index.find(e.src);
    auto d = index.find(e.dst);
    if (s != index.end() && d != index.end()) preds[d->second].push_back(s->second);
  }

  using Bits = std::vector<char>;
  std::vector<Bits> in(nodes.size(), Bits(defs.size(), 0));
  std::vector<Bits> out_bits(nodes.size(), Bits(defs.size(), 0));
  const std::size_t entry_index = index.at(entry);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      Bits in_n(defs.size(), 0);
      if (n == entry_index) {
        for (std::size_t d : param_defs) in_n[d] = 1;
      }
      for (std::size_t p : preds[n]) {
        for (std::size_t d = 0; d < defs.size(); ++d) in_n[d] |= out_bits[p][d];
      }
      Bits out_n = in_n;
      if (gen[n] >= 0) {
        const std::string& var = defs[gen[n]].var;
        for (std::size_t d = 0; d < defs.size(); ++d) {
          if (defs[d].var == var) out_n[d] = 0;
        }
        out_n[gen[n]] = 1;
      }
      if (in_n != in[n] || out_n != out_bits[n]) {
        in[n] = std::move(in_n);
        out_bits[n] = std::move(out_n);
        changed = true;
      }
    }
  }

  for (std::size_t n = 0; n < nodes.size(); ++n) {
    for (const std::string& var : uses_of(ast, nodes[n])) {
      for (std::size_t d = 0; d < defs.size(); ++d) {
        if (in[n][d] && defs[d].var == var && defs[d].vertex != nodes[n]) {
          out.insert(CpgEdge{defs[d].vertex, nodes[n], EdgeType::PdgData, var});
        }
      }
    }
    const CpgVertex& v = ast.vertex(nodes[n]);
    if (v.kind == VertexKind::If || v.kind == VertexKind::While) {
      const auto& kids = ast.children_of(nodes[n]);
      for (const auto& guarded : flatten(ast, {kids.begin() + 1, kids.end()})) {
        out.insert(CpgEdge{kids[0], guarded, EdgeType::PdgCtrl, {}});
      }
    }
  }
}

}  // namespace

EdgeSet build_cfg(const AstFragment& ast) {
  EdgeSet edges;
  CfgBuilder builder(ast, edges);
  for (const auto& method : ast.methods) {
    if (const VertexKey* body = method_body(ast, method)) {
      builder.sequence(ast.children_of(*body), method);
    }
  }
  return edges;
}

EdgeSet build_pdg(const AstFragment& ast, const EdgeSet& cfg) {
  EdgeSet edges;
  for (const auto& method : ast.methods) method_pdg(ast, method, cfg, edges);
  return edges;
}

}  // namespace deltamsg::cpg
