#include "deltamsg/delta/linearize.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace deltamsg::delta {

std::string_view to_string(Marker m) {
  switch (m) {
    case Marker::Add:
      return "ADD";
    case Marker::Del:
      return "DEL";
    case Marker::Ctx:
      return "CTX";
  }
  return "?";
}

std::string LinearizedChange::to_line() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += to_string(t.marker);
    out.push_back(':');
    out += t.token;
  }
  return out;
}

std::vector<const cpg::CpgVertex*> ordered_vertices(const VertexMap& vertices,
                                                    const EdgeSet& block_edges) {
  std::map<VertexKey, int> lowest_type;
  for (const auto& e : block_edges) {
    for (const VertexKey& k : {e.src, e.dst}) {
      int t = static_cast<int>(e.type);
      auto [it, inserted] = lowest_type.emplace(k, t);
      if (!inserted) it->second = std::min(it->second, t);
    }
  }
  auto type_of = [&](const VertexKey& k) {
    auto it = lowest_type.find(k);
    return it == lowest_type.end() ? 4 : it->second;
  };
  std::vector<const cpg::CpgVertex*> out;
  out.reserve(vertices.size());
  for (const auto& [k, v] : vertices) out.push_back(&v);
  std::sort(out.begin(), out.end(), [&](const cpg::CpgVertex* a, const cpg::CpgVertex* b) {
    return std::make_tuple(a->line, a->ordinal, type_of(a->key), a->kind, a->code, a->key) <
           std::make_tuple(b->line, b->ordinal, type_of(b->key), b->kind, b->code, b->key);
  });
  return out;
}

LinearizedChange linearize(const DeltaGraph& delta, std::size_t max_input_len) {
  if (max_input_len < 3) throw std::invalid_argument("max_input_len must be >= 3");
  LinearizedChange out;
  auto emit_block = [&](Marker marker, const VertexMap& vertices, const EdgeSet& edges) {
    std::set<std::string> seen;
    for (const cpg::CpgVertex* v : ordered_vertices(vertices, edges)) {
      std::istringstream pieces(v->code);
      std::string piece;
      while (pieces >> piece) {
        if (!seen.insert(piece).second) continue;
        if (out.tokens.size() >= max_input_len) {
          out.truncated = true;
          return false;
        }
        out.tokens.push_back({marker, piece});
      }
    }
    return true;
  };
  emit_block(Marker::Add, delta.added_vertices, delta.added_edges) &&
      emit_block(Marker::Del, delta.deleted_vertices, delta.deleted_edges) &&
      emit_block(Marker::Ctx, delta.context_vertices, delta.context_edges);
  return out;
}

}  // namespace deltamsg::delta
