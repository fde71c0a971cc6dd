#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deltamsg/gen/candidate.hpp"
#include "deltamsg/gen/shot_index.hpp"

namespace deltamsg::gen {

inline constexpr std::size_t kDefaultPromptBudget = 16000;
inline constexpr std::size_t kMaxShots = 5;

struct PromptTemplate {
  std::string id;
  std::string instruction;
  std::string reasoning;
};

// Template file layout: an "[instruction]" section and an optional
// "[reasoning]" section, each running to the next header or end of file.
PromptTemplate parse_template(std::string id, std::string_view text);

// Templates compiled in from data/prompts, sorted by id.
const std::vector<PromptTemplate>& bundled_templates();
// Throws ConfigError for an unknown id.
const PromptTemplate& find_template(std::string_view id);
inline constexpr const char* kDefaultTemplate = "standard";

struct PromptShot {
  std::string diff;
  std::string message;
  double similarity = 0.0;
};

struct PromptSpec {
  PromptSetting setting = PromptSetting::Zero;
  std::string template_id = kDefaultTemplate;
  std::vector<PromptShot> shots;
  bool reasoning_preamble = false;

  // Throws ConfigError when the shot count does not fit the setting.
  void validate() const;
};

// ZERO for k = 0, ONE for k = 1, MULTI otherwise; takes the first
// min(k, 5) retrieved shots.
PromptSpec make_prompt_spec(std::span<const Shot> retrieved, std::size_t k,
                            std::string template_id = kDefaultTemplate, bool reasoning = false);

struct BuiltPrompt {
  std::string text;
  std::size_t shots_used = 0;
  bool diff_truncated = false;
};

// Layout: instruction, reasoning preamble (when enabled), one
//   DIFF:\n<diff>\nMESSAGE: <message>
// block per shot by descending similarity, then "INPUT DIFF:", the query
// diff and a final "MESSAGE:" cue. Over `char_budget` bytes, shots are
// dropped lowest-similarity first, then the query diff is cut. The fixed text
// alone is never cut.
BuiltPrompt build_prompt_ex(const PromptSpec& spec, std::string_view diff,
                            std::size_t char_budget = kDefaultPromptBudget);
std::string build_prompt(const PromptSpec& spec, std::string_view diff,
                         std::size_t char_budget = kDefaultPromptBudget);

// Number of lines that are exactly "DIFF:".
std::size_t count_shot_blocks(std::string_view prompt);

}  // namespace deltamsg::gen
