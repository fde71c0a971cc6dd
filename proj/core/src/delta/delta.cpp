#include "deltamsg/delta/delta.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "cpg/interchange_detail.hpp"
#include "deltamsg/errors.hpp"

namespace deltamsg::delta {

namespace {

EdgeSet edge_difference(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

EdgeSet edge_intersection(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

VertexMap vertex_difference(const VertexMap& a, const VertexMap& b) {
  VertexMap out;
  for (const auto& [k, v] : a) {
    if (!b.count(k)) out.emplace_hint(out.end(), k, v);
  }
  return out;
}

void collect_endpoints(const EdgeSet& edges, std::set<VertexKey>& out) {
  for (const auto& e : edges) {
    out.insert(e.src);
    out.insert(e.dst);
  }
}

}  // namespace

std::string_view to_string(DeltaClass c) {
  switch (c) {
    case DeltaClass::Added:
      return "added";
    case DeltaClass::Deleted:
      return "deleted";
    case DeltaClass::Context:
      return "context";
  }
  return "?";
}

bool DeltaGraph::empty() const noexcept {
  return added_edges.empty() && deleted_edges.empty() && context_edges.empty() &&
         added_vertices.empty() && deleted_vertices.empty() && context_vertices.empty();
}

const CpgVertex* DeltaGraph::find_vertex(const VertexKey& key) const {
  for (const VertexMap* m : {&added_vertices, &deleted_vertices, &context_vertices}) {
    if (auto it = m->find(key); it != m->end()) return &it->second;
  }
  return nullptr;
}

void DeltaGraph::validate() const {
  if (!edge_intersection(added_edges, deleted_edges).empty() ||
      !edge_intersection(added_edges, context_edges).empty() ||
      !edge_intersection(deleted_edges, context_edges).empty()) {
    throw IntegrityError("delta edge classes overlap");
  }
  for (const auto& [k, v] : added_vertices) {
    if (deleted_vertices.count(k) || context_vertices.count(k)) {
      throw IntegrityError("delta vertex classes overlap");
    }
  }
  for (const auto& [k, v] : deleted_vertices) {
    if (context_vertices.count(k)) throw IntegrityError("delta vertex classes overlap");
  }
  for (const EdgeSet* edges : {&added_edges, &deleted_edges, &context_edges}) {
    for (const auto& e : *edges) {
      if (!find_vertex(e.src) || !find_vertex(e.dst)) {
        throw IntegrityError("delta edge with endpoint outside the delta vertex set");
      }
    }
  }
  std::set<VertexKey> changed;
  collect_endpoints(added_edges, changed);
  collect_endpoints(deleted_edges, changed);
  for (const auto& e : context_edges) {
    if (!changed.count(e.src) && !changed.count(e.dst)) {
      throw IntegrityError("context edge not adjacent to any changed edge");
    }
  }
}

SubGraph common_graph(const CpgGraph& old_version, const CpgGraph& new_version) {
  SubGraph out;
  out.edges = edge_intersection(old_version.edges(), new_version.edges());
  for (const auto& [k, v] : new_version.vertices()) {
    if (old_version.contains(k)) out.vertices.emplace_hint(out.vertices.end(), k, v);
  }
  return out;
}

SubGraph deleted_graph(const CpgGraph& old_version, const CpgGraph& new_version) {
  return SubGraph{edge_difference(old_version.edges(), new_version.edges()),
                  vertex_difference(old_version.vertices(), new_version.vertices())};
}

SubGraph added_graph(const CpgGraph& old_version, const CpgGraph& new_version) {
  return deleted_graph(new_version, old_version);
}

GraphUnion graph_union(const CpgGraph& old_version, const CpgGraph& new_version) {
  GraphUnion out;
  out.edges = old_version.edges();
  out.edges.insert(new_version.edges().begin(), new_version.edges().end());
  out.vertices = new_version.vertices();
  out.vertices.insert(old_version.vertices().begin(), old_version.vertices().end());
  return out;
}

EdgeSet restrict_context(const EdgeSet& common, const EdgeSet& added, const EdgeSet& deleted) {
  std::set<VertexKey> touched;
  collect_endpoints(added, touched);
  collect_endpoints(deleted, touched);
  EdgeSet out;
  for (const auto& e : common) {
    if (touched.count(e.src) || touched.count(e.dst)) out.insert(out.end(), e);
  }
  return out;
}

DeltaGraph build_delta(const CpgGraph& old_version, const CpgGraph& new_version) {
  SubGraph common = common_graph(old_version, new_version);
  SubGraph deleted = deleted_graph(old_version, new_version);
  SubGraph added = added_graph(old_version, new_version);

  DeltaGraph d;
  d.added_edges = std::move(added.edges);
  d.deleted_edges = std::move(deleted.edges);
  d.context_edges = restrict_context(common.edges, d.added_edges, d.deleted_edges);
  d.added_vertices = std::move(added.vertices);
  d.deleted_vertices = std::move(deleted.vertices);

  std::set<VertexKey> kept;
  collect_endpoints(d.added_edges, kept);
  collect_endpoints(d.deleted_edges, kept);
  collect_endpoints(d.context_edges, kept);
  for (const auto& k : kept) {
    if (auto it = common.vertices.find(k); it != common.vertices.end()) {
      d.context_vertices.emplace_hint(d.context_vertices.end(), k, it->second);
    }
  }
  return d;
}

std::string export_delta_json(const DeltaGraph& delta) {
  using cpg::detail::json;
  json vs = json::array();
  std::map<VertexKey, std::size_t> index;
  auto put_vertices = [&](const VertexMap& m, DeltaClass c) {
    for (const auto& [k, v] : m) {
      index[k] = vs.size();
      json j = cpg::detail::vertex_json(v);
      j["delta_class"] = std::string(to_string(c));
      vs.push_back(std::move(j));
    }
  };
  put_vertices(delta.added_vertices, DeltaClass::Added);
  put_vertices(delta.deleted_vertices, DeltaClass::Deleted);
  put_vertices(delta.context_vertices, DeltaClass::Context);

  json es = json::array();
  auto put_edges = [&](const EdgeSet& s, DeltaClass c) {
    for (const auto& e : s) {
      json j = cpg::detail::edge_json(e, index);
      j["delta_class"] = std::string(to_string(c));
      es.push_back(std::move(j));
    }
  };
  put_edges(delta.added_edges, DeltaClass::Added);
  put_edges(delta.deleted_edges, DeltaClass::Deleted);
  put_edges(delta.context_edges, DeltaClass::Context);
  return json{{"vertices", std::move(vs)}, {"edges", std::move(es)}}.dump();
}

DeltaGraph import_delta_json(std::string_view text) {
  cpg::detail::RawInterchange raw = cpg::detail::parse_interchange(text, true);
  auto classify = [](const std::optional<std::string>& c, const std::string& path) {
    if (!c) throw FormatError(path + ".delta_class", "missing field");
    if (*c == "added") return DeltaClass::Added;
    if (*c == "deleted") return DeltaClass::Deleted;
    if (*c == "context") return DeltaClass::Context;
    throw FormatError(path + ".delta_class", "unknown delta class '" + *c + "'");
  };
  DeltaGraph d;
  for (std::size_t i = 0; i < raw.vertices.size(); ++i) {
    const std::string path = "vertices[" + std::to_string(i) + "]";
    VertexMap* target = nullptr;
    switch (classify(raw.vertex_class[i], path)) {
      case DeltaClass::Added:
        target = &d.added_vertices;
        break;
      case DeltaClass::Deleted:
        target = &d.deleted_vertices;
        break;
      case DeltaClass::Context:
        target = &d.context_vertices;
        break;
    }
    target->emplace(raw.vertices[i].key, raw.vertices[i]);
  }
  for (std::size_t i = 0; i < raw.edges.size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "]";
    switch (classify(raw.edge_class[i], path)) {
      case DeltaClass::Added:
        d.added_edges.insert(raw.edges[i]);
        break;
      case DeltaClass::Deleted:
        d.deleted_edges.insert(raw.edges[i]);
        break;
      case DeltaClass::Context:
        d.context_edges.insert(raw.edges[i]);
        break;
    }
  }
  d.validate();
  return d;
}

}  // namespace deltamsg::delta
