#include "deltamsg/gen/candidate.hpp"

#include <sstream>

namespace deltamsg::gen {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Template:
      return "TEMPLATE";
    case Backend::Llm:
      return "LLM";
  }
  return "?";
}

std::string_view to_string(PromptSetting s) {
  switch (s) {
    case PromptSetting::None:
      return "NONE";
    case PromptSetting::Zero:
      return "ZERO";
    case PromptSetting::One:
      return "ONE";
    case PromptSetting::Multi:
      return "MULTI";
  }
  return "?";
}

std::string clamp_message(std::string_view raw, std::size_t max_tokens) {
  std::istringstream lines{std::string(raw)};
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream words(line);
    std::string word, out;
    std::size_t count = 0;
    while (count < max_tokens && words >> word) {
      if (!out.empty()) out.push_back(' ');
      out += word;
      ++count;
    }
    if (!out.empty()) return out;
  }
  return "";
}

}  // namespace deltamsg::gen
