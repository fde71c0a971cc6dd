#include "deltamsg/gen/template_backend.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace deltamsg::gen {

namespace {

using cpg::CpgVertex;
using cpg::VertexKind;
using cpg::VertexMap;

std::string short_scope(const std::string& signature) {
  const auto paren = signature.find('(');
  if (paren == std::string::npos) return signature;
  const auto dot = signature.rfind('.', paren);
  return signature.substr(dot == std::string::npos ? 0 : dot + 1, paren - (dot == std::string::npos ? 0 : dot + 1));
}

std::string class_of(const std::string& signature) {
  const auto paren = signature.find('(');
  const auto dot = signature.rfind('.', paren);
  if (paren == std::string::npos || dot == std::string::npos) return signature;
  return signature.substr(0, dot);
}

std::string dominant_signature(const delta::DeltaGraph& d) {
  std::map<std::string, std::size_t> counts;
  for (const auto* vs : {&d.added_vertices, &d.deleted_vertices}) {
    for (const auto& [k, v] : *vs) ++counts[v.signature];
  }
  if (counts.empty()) {
    // Pure rewiring of existing statements: fall back to the context.
    for (const auto& [k, v] : d.context_vertices) ++counts[v.signature];
  }
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [sig, c] : counts) {
    if (c > best_count) {
      best = sig;
      best_count = c;
    }
  }
  return best;
}

bool is_statement(VertexKind k) {
  switch (k) {
    case VertexKind::Decl:
    case VertexKind::Assign:
    case VertexKind::If:
    case VertexKind::While:
    case VertexKind::Return:
      return true;
    default:
      return false;
  }
}

std::vector<const CpgVertex*> in_line_order(const VertexMap& vs, const std::string& sig) {
  std::vector<const CpgVertex*> out;
  for (const auto& [k, v] : vs) {
    if (v.signature == sig) out.push_back(&v);
  }
  std::sort(out.begin(), out.end(), [](const CpgVertex* a, const CpgVertex* b) {
    return std::tie(a->line, a->ordinal, a->key) < std::tie(b->line, b->ordinal, b->key);
  });
  return out;
}

std::vector<std::string> codes_of(const std::vector<const CpgVertex*>& vs, VertexKind kind) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto* v : vs) {
    if (v->kind == kind && seen.insert(v->code).second) out.push_back(v->code);
  }
  return out;
}

std::size_t count_statements(const std::vector<const CpgVertex*>& vs) {
  return static_cast<std::size_t>(
      std::count_if(vs.begin(), vs.end(), [](const CpgVertex* v) { return is_statement(v->kind); }));
}

std::string plural(std::size_t k, const char* word) {
  return std::to_string(k) + " " + word + (k == 1 ? "" : "s");
}

std::vector<std::string> method_changes(const delta::DeltaGraph& d) {
  std::vector<std::string> out;
  auto collect = [&](const VertexMap& vs, const char* verb, const char* prep) {
    for (const auto& [k, v] : vs) {
      if (v.kind == VertexKind::Method) {
        out.push_back(std::string(verb) + " method " + short_scope(v.signature) + " " + prep + " " +
                      class_of(v.signature));
      }
    }
  };
  collect(d.added_vertices, "add", "to");
  collect(d.deleted_vertices, "remove", "from");
  return out;
}

}  // namespace

std::string dominant_scope(const delta::DeltaGraph& delta) {
  return short_scope(dominant_signature(delta));
}

std::vector<CandidateMessage> template_generate(const delta::DeltaGraph& delta, std::size_t n) {
  auto wrap = [](std::string text) {
    return CandidateMessage{clamp_message(text), Backend::Template, PromptSetting::None, std::nullopt};
  };
  if (n == 0) n = 1;
  if (delta.empty()) return {wrap(kNoChangeMessage)};

  const std::string sig = dominant_signature(delta);
  const std::string scope = short_scope(sig);
  const auto added = in_line_order(delta.added_vertices, sig);
  const auto deleted = in_line_order(delta.deleted_vertices, sig);

  std::vector<std::string> messages;
  const auto ops_new = codes_of(added, VertexKind::BinOp);
  const auto ops_old = codes_of(deleted, VertexKind::BinOp);
  const bool cond_changed = !codes_of(added, VertexKind::Condition).empty() &&
                            !codes_of(deleted, VertexKind::Condition).empty();
  if (!ops_new.empty() && !ops_old.empty() && (cond_changed || ops_new.size() == 1)) {
    messages.push_back("update " + scope + ": change condition '" + ops_old.front() + "' to '" +
                       ops_new.front() + "'");
  }
  for (auto& m : method_changes(delta)) messages.push_back(std::move(m));

  const std::size_t k = count_statements(added);
  const std::size_t j = count_statements(deleted);
  if (k > 0 && j > 0) {
    messages.push_back("update " + scope + ": add " + plural(k, "statement") + ", remove " +
                       std::to_string(j));
  } else if (k > 0) {
    messages.push_back("update " + scope + ": add " + plural(k, "statement"));
  } else if (j > 0) {
    messages.push_back("update " + scope + ": remove " + plural(j, "statement"));
  }

  const auto lits_new = codes_of(added, VertexKind::Literal);
  const auto lits_old = codes_of(deleted, VertexKind::Literal);
  if (!lits_new.empty() && !lits_old.empty()) {
    messages.push_back("change value " + lits_old.front() + " to " + lits_new.front() + " in " + scope);
  }
  for (const auto& c : codes_of(added, VertexKind::Call)) messages.push_back("call " + c + " in " + scope);
  for (const auto& c : codes_of(deleted, VertexKind::Call)) {
    messages.push_back("remove call to " + c + " in " + scope);
  }
  const auto ids_new = codes_of(added, VertexKind::Ident);
  const auto ids_old = codes_of(deleted, VertexKind::Ident);
  if (!ids_new.empty() && !ids_old.empty() && ids_new.front() != ids_old.front()) {
    messages.push_back("replace " + ids_old.front() + " with " + ids_new.front() + " in " + scope);
  }
  if (added.empty() && deleted.empty()) messages.push_back("reorder statements in " + scope);

  for (const char* verb : {"update", "refactor", "modify", "adjust", "rework", "clean up", "simplify",
                           "tweak"}) {
    messages.push_back(std::string(verb) + " " + scope);
  }

  std::vector<std::string> distinct;
  std::set<std::string> seen;
  for (auto& m : messages) {
    if (seen.insert(m).second) distinct.push_back(std::move(m));
  }
  std::vector<CandidateMessage> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(wrap(distinct[i % distinct.size()]));
  return out;
}

}  // namespace deltamsg::gen
