#pragma once

// Shared JSON codec for the CPG and delta interchange files. Internal to the
// core library.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deltamsg/cpg/graph.hpp"
#include "json.hpp"

namespace deltamsg::cpg::detail {

using nlohmann::json;

json vertex_json(const CpgVertex& v);
json edge_json(const CpgEdge& e, const std::map<VertexKey, std::size_t>& index);

struct RawInterchange {
  std::vector<CpgVertex> vertices;  // keys already computed
  std::vector<CpgEdge> edges;       // endpoints resolved through indices
  // Populated only when parsed with `delta_class` allowed; nullopt when the
  // field was absent.
  std::vector<std::optional<std::string>> vertex_class;
  std::vector<std::optional<std::string>> edge_class;
};

// Validates the schema and resolves indices. `allow_delta_class` admits the
// extra per-item "delta_class" string used by the delta format.
RawInterchange parse_interchange(std::string_view text, bool allow_delta_class);

}  // namespace deltamsg::cpg::detail
