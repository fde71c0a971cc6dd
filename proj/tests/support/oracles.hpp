#pragma once

// Reference implementations used to cross-check the library. They work from
// exported data (JSON, edge lists) rather than library internals wherever
// that is possible.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "deltamsg/cpg/cpg.hpp"
#include "deltamsg/delta/delta.hpp"
#include "json.hpp"

namespace deltamsg::testing {

// ---- serialized edge lists ----------------------------------------------

inline std::string vertex_id(const nlohmann::json& v) {
  return v.at("kind").get<std::string>() + "|" + v.at("code").get<std::string>() + "|" +
         v.at("signature").get<std::string>() + "|" + std::to_string(v.at("ordinal").get<int>());
}

struct EdgeString {
  std::string src, dst, text;
  friend bool operator<(const EdgeString& a, const EdgeString& b) { return a.text < b.text; }
  friend bool operator==(const EdgeString& a, const EdgeString& b) { return a.text == b.text; }
};

inline std::set<EdgeString> serialized_edges(const nlohmann::json& doc) {
  std::vector<std::string> ids;
  for (const auto& v : doc.at("vertices")) ids.push_back(vertex_id(v));
  std::set<EdgeString> out;
  for (const auto& e : doc.at("edges")) {
    const auto& s = ids.at(e.at("src_index").get<std::size_t>());
    const auto& d = ids.at(e.at("dst_index").get<std::size_t>());
    out.insert({s, d, s + " -" + e.at("etype").get<std::string>() + "[" + e.at("label").get<std::string>() + "]-> " + d});
  }
  return out;
}

inline std::set<EdgeString> serialized_edges(const cpg::CpgGraph& g) {
  return serialized_edges(nlohmann::json::parse(cpg::export_cpg_json(g)));
}

// Edges of one delta_class in an exported delta.
inline std::set<EdgeString> serialized_delta_edges(const delta::DeltaGraph& d, const std::string& cls) {
  const auto doc = nlohmann::json::parse(delta::export_delta_json(d));
  std::vector<std::string> ids;
  for (const auto& v : doc.at("vertices")) ids.push_back(vertex_id(v));
  std::set<EdgeString> out;
  for (const auto& e : doc.at("edges")) {
    if (e.at("delta_class") != cls) continue;
    const auto& s = ids.at(e.at("src_index").get<std::size_t>());
    const auto& t = ids.at(e.at("dst_index").get<std::size_t>());
    out.insert({s, t, s + " -" + e.at("etype").get<std::string>() + "[" + e.at("label").get<std::string>() + "]-> " + t});
  }
  return out;
}

inline std::set<EdgeString> set_minus(const std::set<EdgeString>& a, const std::set<EdgeString>& b) {
  std::set<EdgeString> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline std::set<EdgeString> set_and(const std::set<EdgeString>& a, const std::set<EdgeString>& b) {
  std::set<EdgeString> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

struct OracleDelta {
  std::set<EdgeString> added, deleted, common, context;
};

// Context by breadth-first search over the common edges: an edge is kept when
// one of its endpoints lies at distance 0 from the changed part.
inline std::set<EdgeString> bfs_context(const std::set<EdgeString>& common, const std::set<EdgeString>& added,
                                        const std::set<EdgeString>& deleted) {
  std::map<std::string, int> dist;
  std::queue<std::string> frontier;
  for (const auto* s : {&added, &deleted}) {
    for (const auto& e : *s) {
      for (const auto* v : {&e.src, &e.dst}) {
        if (dist.emplace(*v, 0).second) frontier.push(*v);
      }
    }
  }
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : common) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  while (!frontier.empty()) {
    const std::string v = frontier.front();
    frontier.pop();
    if (dist[v] >= 1) continue;
    for (const auto& w : adj[v]) {
      if (dist.emplace(w, dist[v] + 1).second) frontier.push(w);
    }
  }
  std::set<EdgeString> out;
  for (const auto& e : common) {
    auto d = [&](const std::string& v) {
      auto it = dist.find(v);
      return it == dist.end() ? 1 << 30 : it->second;
    };
    if (std::min(d(e.src), d(e.dst)) == 0) out.insert(e);
  }
  return out;
}

inline OracleDelta oracle_delta(const cpg::CpgGraph& old_version, const cpg::CpgGraph& new_version) {
  const auto a = serialized_edges(old_version);
  const auto b = serialized_edges(new_version);
  OracleDelta d;
  d.added = set_minus(b, a);
  d.deleted = set_minus(a, b);
  d.common = set_and(a, b);
  d.context = bfs_context(d.common, d.added, d.deleted);
  return d;
}

// ---- reaching definitions by path enumeration ----------------------------

// PDG_DATA edges of a single-method graph, recomputed from its AST and CFG
// edges. A definition of x reaches n when some simple CFG path from the
// definition to n has no other definition of x strictly inside it.
inline cpg::EdgeSet path_reaching_data_edges(const cpg::CpgGraph& g) {
  using cpg::CpgEdge;
  using cpg::EdgeType;
  using cpg::VertexKey;
  using cpg::VertexKind;

  std::map<VertexKey, std::vector<VertexKey>> ast_kids, succ;
  for (const auto& e : g.edges()) {
    if (e.type == EdgeType::Ast) ast_kids[e.src].push_back(e.dst);
    if (e.type == EdgeType::Cfg) succ[e.src].push_back(e.dst);
  }
  auto kind = [&](const VertexKey& k) { return g.find(k)->kind; };

  cpg::EdgeSet out;
  for (const auto& [mk, method] : g.vertices()) {
    if (method.kind != VertexKind::Method) continue;
    std::vector<std::string> params;
    const VertexKey* body = nullptr;
    for (const auto& k : ast_kids[mk]) {
      if (kind(k) == VertexKind::Param) params.push_back(g.find(k)->code);
      if (kind(k) == VertexKind::Block) body = &k;
    }
    if (!body || ast_kids[*body].empty()) continue;
    VertexKey entry = *std::min_element(ast_kids[*body].begin(), ast_kids[*body].end(), [&](auto& x, auto& y) {
      return std::tie(g.find(x)->line, g.find(x)->ordinal) < std::tie(g.find(y)->line, g.find(y)->ordinal);
    });

    std::set<VertexKey> nodes{entry};
    for (const auto& e : g.edges()) {
      if (e.type != EdgeType::Cfg || g.find(e.src)->signature != method.signature) continue;
      nodes.insert(e.src);
      nodes.insert(e.dst);
    }
    nodes.erase(mk);

    auto def_var = [&](const VertexKey& k) -> std::string {
      const auto* v = g.find(k);
      if (v->kind == VertexKind::Decl) return v->code;
      if (v->kind == VertexKind::Assign && v->code.find('.') == std::string::npos) return v->code;
      return "";
    };
    std::function<void(const VertexKey&, std::set<std::string>&)> idents = [&](const VertexKey& k,
                                                                               std::set<std::string>& acc) {
      const auto* v = g.find(k);
      if (v->kind == VertexKind::Ident && v->code != "this") acc.insert(v->code);
      for (const auto& c : ast_kids[k]) idents(c, acc);
    };
    auto uses = [&](const VertexKey& k) {
      std::set<std::string> acc;
      const auto kk = kind(k);
      if (kk == VertexKind::If || kk == VertexKind::While) {
        for (const auto& c : ast_kids[k]) {
          if (kind(c) == VertexKind::Condition) idents(c, acc);
        }
      } else if (kk != VertexKind::Block) {
        idents(k, acc);
      }
      return acc;
    };

    // Every node reachable from `start` along a simple path that does not
    // pass through a redefinition of `var`.
    auto reach = [&](const VertexKey& start, const std::string& var, bool include_start) {
      std::set<VertexKey> reached;
      std::set<VertexKey> on_path{start};
      std::function<void(const VertexKey&)> walk = [&](const VertexKey& at) {
        for (const auto& nxt : succ[at]) {
          if (!nodes.count(nxt)) continue;
          reached.insert(nxt);
          if (on_path.count(nxt) || def_var(nxt) == var) continue;
          on_path.insert(nxt);
          walk(nxt);
          on_path.erase(nxt);
        }
      };
      if (include_start) {
        reached.insert(start);
        if (def_var(start) == var) return reached;
      }
      walk(start);
      return reached;
    };

    for (const auto& n : nodes) {
      const std::string var = def_var(n);
      if (var.empty()) continue;
      for (const auto& u : reach(n, var, false)) {
        if (u != n && uses(u).count(var)) out.insert(CpgEdge{n, u, EdgeType::PdgData, var});
      }
    }
    for (const auto& k : ast_kids[mk]) {
      if (kind(k) != VertexKind::Param) continue;
      const std::string& var = g.find(k)->code;
      for (const auto& u : reach(entry, var, true)) {
        if (uses(u).count(var)) out.insert(CpgEdge{k, u, EdgeType::PdgData, var});
      }
    }
  }
  return out;
}

// ---- metrics ---------------------------------------------------------------

// Longest common subsequence by trying every subsequence of `a`.
inline std::size_t brute_force_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    const auto len = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (len <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else ++j;
    }
    if (ok) best = len;
  }
  return best;
}

struct BruteAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Every one-to-one exact-match alignment; most matches, then fewest chunks.
inline BruteAlignment brute_force_alignment(const std::vector<std::string>& cand,
                                            const std::vector<std::string>& ref) {
  BruteAlignment best;
  bool have = false;
  std::vector<int> to(cand.size(), -1);
  std::vector<bool> used(ref.size(), false);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == cand.size()) {
      std::size_t m = 0, chunks = 0;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        if (to[k] < 0) continue;
        ++m;
        if (k == 0 || to[k - 1] < 0 || to[k - 1] + 1 != to[k]) ++chunks;
      }
      if (!have || m > best.matches || (m == best.matches && chunks < best.chunks)) {
        best = {m, chunks};
        have = true;
      }
      return;
    }
    to[i] = -1;
    go(i + 1);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (!used[j] && ref[j] == cand[i]) {
        used[j] = true;
        to[i] = static_cast<int>(j);
        go(i + 1);
        to[i] = -1;
        used[j] = false;
      }
    }
  };
  go(0);
  return best;
}

inline double reference_meteor(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  const auto a = brute_force_alignment(cand, ref);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(cand.size());
  const double r = m / static_cast<double>(ref.size());
  const double f = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  return 100.0 * f * (1.0 - 0.5 * frag * frag * frag);
}

// ---- shot retrieval --------------------------------------------------------

// Dense tf-idf cosine, computed from scratch for each query.
inline std::vector<double> brute_force_cosines(const std::vector<std::string>& docs, const std::string& query) {
  auto tokens = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      const auto u = static_cast<unsigned char>(c);
      if (u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || c == '_') {
        cur += c;
      } else if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };
  std::map<std::string, double> df;
  for (const auto& d : docs) {
    auto t = tokens(d);
    for (const auto& w : std::set<std::string>(t.begin(), t.end())) df[w] += 1;
  }
  const double n = static_cast<double>(docs.size());
  auto weights = [&](const std::string& text) {
    std::map<std::string, double> w;
    for (const auto& t : tokens(text)) w[t] += 1;
    for (auto& [t, v] : w) v *= std::log((1 + n) / (1 + (df.count(t) ? df[t] : 0.0))) + 1;
    return w;
  };
  auto norm = [](const std::map<std::string, double>& w) {
    double s = 0;
    for (const auto& [t, v] : w) s += v * v;
    return std::sqrt(s);
  };
  const auto q = weights(query);
  std::vector<double> out;
  for (const auto& d : docs) {
    const auto w = weights(d);
    double dotp = 0;
    for (const auto& [t, v] : q) {
      auto it = w.find(t);
      if (it != w.end()) dotp += v * it->second;
    }
    const double denom = norm(q) * norm(w);
    out.push_back(denom > 0 ? dotp / denom : 0.0);
  }
  return out;
}

}  // namespace deltamsg::testing
