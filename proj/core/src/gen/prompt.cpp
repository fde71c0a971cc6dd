#include "deltamsg/gen/prompt.hpp"

#include <algorithm>
#include <sstream>

#include "deltamsg/errors.hpp"

namespace deltamsg::gen {

namespace {

struct EmbeddedTemplate {
  const char* id;
  const char* text;
};

#include "prompt_templates.inc"

std::string trim_block(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t utf8_floor(std::string_view s, std::size_t n) {
  if (n >= s.size()) return s.size();
  while (n > 0 && (static_cast<unsigned char>(s[n]) & 0xC0) == 0x80) --n;
  return n;
}

}  // namespace

PromptTemplate parse_template(std::string id, std::string_view text) {
  PromptTemplate t;
  t.id = std::move(id);
  std::istringstream in{std::string(text)};
  std::string line;
  std::string* section = nullptr;
  bool seen_instruction = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[instruction]") {
      section = &t.instruction;
      seen_instruction = true;
    } else if (line == "[reasoning]") {
      section = &t.reasoning;
    } else if (section != nullptr) {
      *section += line;
      *section += '\n';
    } else if (!trim_block(line).empty()) {
      throw ConfigError("prompt template " + t.id + ": text before the first section");
    }
  }
  t.instruction = trim_block(t.instruction);
  t.reasoning = trim_block(t.reasoning);
  if (!seen_instruction || t.instruction.empty()) {
    throw ConfigError("prompt template " + t.id + " has no instruction");
  }
  return t;
}

const std::vector<PromptTemplate>& bundled_templates() {
  static const std::vector<PromptTemplate> templates = [] {
    std::vector<PromptTemplate> out;
    for (const auto& e : kEmbeddedTemplates) out.push_back(parse_template(e.id, e.text));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
  }();
  return templates;
}

const PromptTemplate& find_template(std::string_view id) {
  for (const auto& t : bundled_templates()) {
    if (t.id == id) return t;
  }
  std::string known;
  for (const auto& t : bundled_templates()) known += (known.empty() ? "" : ", ") + t.id;
  throw ConfigError("unknown prompt template '" + std::string(id) + "' (known: " + known + ")");
}

void PromptSpec::validate() const {
  const std::size_t n = shots.size();
  bool ok = true;
  switch (setting) {
    case PromptSetting::Zero:
      ok = n == 0;
      break;
    case PromptSetting::One:
      ok = n == 1;
      break;
    case PromptSetting::Multi:
      ok = n >= 2 && n <= kMaxShots;
      break;
    case PromptSetting::None:
      ok = false;
      break;
  }
  if (!ok) {
    throw ConfigError("prompt setting " + std::string(to_string(setting)) + " with " +
                      std::to_string(n) + " shots");
  }
}

PromptSpec make_prompt_spec(std::span<const Shot> retrieved, std::size_t k, std::string template_id,
                            bool reasoning) {
  PromptSpec spec;
  spec.template_id = std::move(template_id);
  spec.reasoning_preamble = reasoning;
  const std::size_t take = std::min({k, kMaxShots, retrieved.size()});
  for (std::size_t i = 0; i < take; ++i) {
    spec.shots.push_back({retrieved[i].diff, retrieved[i].message, retrieved[i].similarity});
  }
  spec.setting = take == 0 ? PromptSetting::Zero : take == 1 ? PromptSetting::One : PromptSetting::Multi;
  return spec;
}

BuiltPrompt build_prompt_ex(const PromptSpec& spec, std::string_view diff, std::size_t char_budget) {
  spec.validate();
  const PromptTemplate& tpl = find_template(spec.template_id);

  std::string head = tpl.instruction + "\n\n";
  if (spec.reasoning_preamble && !tpl.reasoning.empty()) head += tpl.reasoning + "\n\n";

  std::vector<const PromptShot*> shots;
  for (const auto& s : spec.shots) shots.push_back(&s);
  std::stable_sort(shots.begin(), shots.end(),
                   [](const PromptShot* a, const PromptShot* b) { return a->similarity > b->similarity; });
  std::vector<std::string> blocks;
  for (const auto* s : shots) {
    blocks.push_back("DIFF:\n" + trim_block(s->diff) + "\nMESSAGE: " + clamp_message(s->message) + "\n\n");
  }

  const std::string tail_open = "INPUT DIFF:\n";
  const std::string tail_close = "\nMESSAGE:\n";
  const std::string query = trim_block(std::string(diff));

  auto fixed_size = [&](std::size_t nblocks) {
    std::size_t n = head.size() + tail_open.size() + tail_close.size();
    for (std::size_t i = 0; i < nblocks; ++i) n += blocks[i].size();
    return n;
  };
  std::size_t used = blocks.size();
  while (used > 0 && fixed_size(used) + query.size() > char_budget) --used;

  BuiltPrompt out;
  out.shots_used = used;
  std::string_view q = query;
  const std::size_t fixed = fixed_size(used);
  if (fixed + q.size() > char_budget) {
    const std::size_t room = char_budget > fixed ? char_budget - fixed : 0;
    q = q.substr(0, utf8_floor(q, room));
    out.diff_truncated = true;
  }
  out.text = head;
  for (std::size_t i = 0; i < used; ++i) out.text += blocks[i];
  out.text += tail_open;
  out.text += q;
  out.text += tail_close;
  return out;
}

std::string build_prompt(const PromptSpec& spec, std::string_view diff, std::size_t char_budget) {
  return build_prompt_ex(spec, diff, char_budget).text;
}

std::size_t count_shot_blocks(std::string_view prompt) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos <= prompt.size()) {
    auto end = prompt.find('\n', pos);
    if (end == std::string_view::npos) end = prompt.size();
    if (prompt.substr(pos, end - pos) == "DIFF:") ++n;
    pos = end + 1;
  }
  return n;
}

}  // namespace deltamsg::gen
