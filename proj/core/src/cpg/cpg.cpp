#include "deltamsg/cpg/cpg.hpp"

#include <set>

#include "deltamsg/errors.hpp"
#include "deltamsg/io.hpp"
#include "interchange_detail.hpp"

namespace deltamsg::cpg {

CpgGraph build_cpg(const SourceUnit& unit) {
  AstFragment ast = parse_source(unit);
  EdgeSet cfg = build_cfg(ast);
  EdgeSet pdg = build_pdg(ast, cfg);
  CpgGraph g = std::move(ast.graph);
  for (const auto& e : cfg) g.add_edge(e);
  for (const auto& e : pdg) g.add_edge(e);
  return g;
}

namespace detail {

json vertex_json(const CpgVertex& v) {
  return json{{"kind", std::string(to_string(v.kind))},
              {"code", v.code},
              {"signature", v.signature},
              {"ordinal", v.ordinal},
              {"line", v.line}};
}

json edge_json(const CpgEdge& e, const std::map<VertexKey, std::size_t>& index) {
  return json{{"src_index", index.at(e.src)},
              {"dst_index", index.at(e.dst)},
              {"etype", std::string(to_string(e.type))},
              {"label", e.label}};
}

namespace {

std::string at_path(const std::string& base, std::size_t i, const char* field = nullptr) {
  std::string p = base + "[" + std::to_string(i) + "]";
  if (field) p += std::string(".") + field;
  return p;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw FormatError(path + "." + item.key(), "unknown field");
  }
}

const json& require(const json& obj, const char* field, const std::string& path) {
  auto it = obj.find(field);
  if (it == obj.end()) throw FormatError(path + "." + field, "missing field");
  return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_string()) throw FormatError(path + "." + field, "expected string");
  return v.get<std::string>();
}

long long require_int(const json& obj, const char* field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_number_integer()) throw FormatError(path + "." + field, "expected integer");
  return v.get<long long>();
}

std::optional<std::string> optional_class(const json& obj, const std::string& path) {
  auto it = obj.find("delta_class");
  if (it == obj.end()) return std::nullopt;
  if (!it->is_string()) throw FormatError(path + ".delta_class", "expected string");
  return it->get<std::string>();
}

}  // namespace

RawInterchange parse_interchange(std::string_view text, bool allow_delta_class) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("", "top level must be an object");
  reject_unknown(doc, "", {"vertices", "edges"});
  const json& vs = require(doc, "vertices", "");
  const json& es = require(doc, "edges", "");
  if (!vs.is_array()) throw FormatError("vertices", "expected array");
  if (!es.is_array()) throw FormatError("edges", "expected array");

  RawInterchange raw;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const json& v = vs[i];
    const std::string path = at_path("vertices", i);
    if (!v.is_object()) throw FormatError(path, "expected object");
    if (allow_delta_class) {
      reject_unknown(v, path, {"kind", "code", "signature", "ordinal", "line", "delta_class"});
    } else {
      reject_unknown(v, path, {"kind", "code", "signature", "ordinal", "line"});
    }
    CpgVertex out;
    std::string kind = require_string(v, "kind", path);
    auto parsed = parse_vertex_kind(kind);
    if (!parsed) throw FormatError(path + ".kind", "unknown vertex kind '" + kind + "'");
    out.kind = *parsed;
    out.code = require_string(v, "code", path);
    out.signature = require_string(v, "signature", path);
    long long ordinal = require_int(v, "ordinal", path);
    if (ordinal < 0) throw FormatError(path + ".ordinal", "must be >= 0");
    out.ordinal = static_cast<int>(ordinal);
    out.line = static_cast<int>(require_int(v, "line", path));
    out.key = VertexKey::make(out.kind, out.code, out.signature, out.ordinal);
    raw.vertices.push_back(std::move(out));
    raw.vertex_class.push_back(allow_delta_class ? optional_class(v, path) : std::nullopt);
  }
  for (std::size_t i = 0; i < es.size(); ++i) {
    const json& e = es[i];
    const std::string path = at_path("edges", i);
    if (!e.is_object()) throw FormatError(path, "expected object");
    if (allow_delta_class) {
      reject_unknown(e, path, {"src_index", "dst_index", "etype", "label", "delta_class"});
    } else {
      reject_unknown(e, path, {"src_index", "dst_index", "etype", "label"});
    }
    long long src = require_int(e, "src_index", path);
    long long dst = require_int(e, "dst_index", path);
    std::string etype = require_string(e, "etype", path);
    auto type = parse_edge_type(etype);
    if (!type) throw FormatError(path + ".etype", "unknown edge type '" + etype + "'");
    std::string label;
    if (auto it = e.find("label"); it != e.end() && !it->is_null()) {
      if (!it->is_string()) throw FormatError(path + ".label", "expected string");
      label = it->get<std::string>();
    }
    auto out_of_range = [&](long long idx) {
      return idx < 0 || static_cast<std::size_t>(idx) >= raw.vertices.size();
    };
    if (out_of_range(src) || out_of_range(dst)) {
      throw IntegrityError(path + ": edge references missing vertex");
    }
    raw.edges.push_back(CpgEdge{raw.vertices[static_cast<std::size_t>(src)].key,
                                raw.vertices[static_cast<std::size_t>(dst)].key, *type,
                                std::move(label)});
    raw.edge_class.push_back(allow_delta_class ? optional_class(e, path) : std::nullopt);
  }
  return raw;
}

}  // namespace detail

std::string export_cpg_json(const CpgGraph& graph) {
  detail::json vs = detail::json::array();
  std::map<VertexKey, std::size_t> index;
  for (const auto& [key, v] : graph.vertices()) {
    index[key] = vs.size();
    vs.push_back(detail::vertex_json(v));
  }
  detail::json es = detail::json::array();
  for (const auto& e : graph.edges()) es.push_back(detail::edge_json(e, index));
  return detail::json{{"vertices", std::move(vs)}, {"edges", std::move(es)}}.dump();
}

CpgGraph import_cpg_json(std::string_view text) {
  detail::RawInterchange raw = detail::parse_interchange(text, false);
  CpgGraph g;
  for (auto& v : raw.vertices) g.add_vertex(std::move(v));
  for (auto& e : raw.edges) g.add_edge(std::move(e));
  g.validate();
  return g;
}

CpgGraph import_cpg(const std::filesystem::path& path) {
  CpgGraph g = import_cpg_json(read_text_file(path));
  g.set_origin(path.string());
  return g;
}

CpgGraph load_version(const std::filesystem::path& path) {
  if (path.extension() == ".json") return import_cpg(path);
  return build_cpg(SourceUnit{path.string(), read_text_file(path), kMiniJava});
}

}  // namespace deltamsg::cpg
