#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace deltamsg::gen {

inline constexpr std::size_t kDefaultMaxGenLen = 80;
inline constexpr std::size_t kDefaultCandidates = 5;

enum class Backend { Template, Llm };
enum class PromptSetting { None, Zero, One, Multi };

std::string_view to_string(Backend b);
std::string_view to_string(PromptSetting s);

struct CandidateMessage {
  std::string text;
  Backend backend = Backend::Template;
  PromptSetting prompt_setting = PromptSetting::None;
  std::optional<double> rank_score;

  friend bool operator==(const CandidateMessage&, const CandidateMessage&) = default;
};

// First non-blank line of `raw`, trimmed, whitespace collapsed, and cut to at
// most `max_tokens` whitespace tokens. Empty when `raw` has no visible text.
std::string clamp_message(std::string_view raw, std::size_t max_tokens = kDefaultMaxGenLen);

}  // namespace deltamsg::gen
