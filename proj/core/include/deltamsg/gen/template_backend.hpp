#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "deltamsg/delta/delta.hpp"
#include "deltamsg/gen/candidate.hpp"

namespace deltamsg::gen {

inline constexpr const char* kNoChangeMessage = "no functional change detected";

// Deterministic baseline generator. Builds messages from delta statistics
// (changed conditions, added/removed methods, statement counts, calls,
// identifiers, literals) followed by generic "update <scope>" variants, and
// returns the first n distinct ones, cycling if n exceeds the variants.
// An empty delta yields the single message kNoChangeMessage.
std::vector<CandidateMessage> template_generate(const delta::DeltaGraph& delta,
                                                std::size_t n = kDefaultCandidates);

// Short name of the scope with the most changed vertices: the method name
// for method signatures, the class name otherwise. Empty for empty deltas.
std::string dominant_scope(const delta::DeltaGraph& delta);

}  // namespace deltamsg::gen
