#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "deltamsg/delta/delta.hpp"

namespace deltamsg::delta {

inline constexpr std::size_t kDefaultMaxInputLen = 512;

enum class Marker { Add, Del, Ctx };
std::string_view to_string(Marker m);

struct MarkedToken {
  Marker marker;
  std::string token;

  friend bool operator==(const MarkedToken&, const MarkedToken&) = default;
};

struct LinearizedChange {
  std::vector<MarkedToken> tokens;
  bool truncated = false;

  // Space-separated "<MARKER>:<token>" items.
  std::string to_line() const;
};

// Flattens a delta into ADD tokens, then DEL, then CTX. Each vertex
// contributes the whitespace-separated pieces of its code; vertices within a
// block are ordered by (line, ordinal, lowest incident edge type) and exact
// duplicate tokens inside a block are dropped. Output is cut at
// `max_input_len` whole tokens. Throws std::invalid_argument when
// max_input_len < 3.
LinearizedChange linearize(const DeltaGraph& delta,
                           std::size_t max_input_len = kDefaultMaxInputLen);

// Vertices of one delta class in linearization order.
std::vector<const cpg::CpgVertex*> ordered_vertices(const VertexMap& vertices,
                                                    const EdgeSet& block_edges);

}  // namespace deltamsg::delta
