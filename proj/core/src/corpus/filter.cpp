#include "deltamsg/corpus/filter.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "deltamsg/cpg/parser.hpp"
#include "deltamsg/errors.hpp"
#include "deltamsg/io.hpp"

namespace deltamsg::corpus {

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 8> kRuleIds{{
    {Rule::JavaOnly, "JAVA_ONLY"},
    {Rule::ParseFail, "PARSE_FAIL"},
    {Rule::TooShort, "TOO_SHORT"},
    {Rule::TooLong, "TOO_LONG"},
    {Rule::MergeRevert, "MERGE_REVERT"},
    {Rule::Bot, "BOT"},
    {Rule::NonVerbStart, "NON_VERB_START"},
    {Rule::NonAsciiMajority, "NON_ASCII_MAJORITY"},
}};

// Keep in sync with data/verbs.txt (a unit test compares the two).
constexpr std::array<std::string_view, 66> kVerbs{
    "add", "adjust", "allow", "apply", "avoid", "bump", "change", "check", "clean", "close",
    "convert", "correct", "create", "deprecate", "disable", "document", "drop", "enable",
    "ensure", "expose", "extend", "extract", "fix", "format", "handle", "hide", "implement",
    "improve", "include", "increase", "initialize", "inline", "introduce", "limit", "load",
    "log", "make", "merge", "migrate", "move", "optimize", "polish", "prepare", "prevent",
    "reduce", "refactor", "register", "release", "remove", "rename", "reorganize", "replace",
    "reset", "resolve", "restore", "return", "revert", "rework", "set", "simplify", "skip",
    "split", "support", "tweak", "update", "use",
};

std::vector<std::string_view> whitespace_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Strips leading/trailing punctuation so "Fix:" and "(fix)" both yield "fix".
std::string bare_word(std::string_view token) {
  std::size_t b = 0, e = token.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(token[e - 1]))) --e;
  return lower(token.substr(b, e - b));
}

// Message consisting only of a pull-request reference such as "(#1234)".
bool is_pr_reference_only(std::string_view msg) {
  std::string t = trim(msg);
  if (t.size() < 4 || t.front() != '(' || t[1] != '#' || t.back() != ')') return false;
  return std::all_of(t.begin() + 2, t.end() - 1,
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

double non_ascii_ratio(std::string_view s) {
  std::size_t chars = 0, non_ascii = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
    ++chars;
    if (c >= 0x80) ++non_ascii;
  }
  return chars == 0 ? 0.0 : static_cast<double>(non_ascii) / static_cast<double>(chars);
}

std::vector<std::string> comma_list(std::string_view v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(v)};
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string_view to_string(Rule r) {
  for (const auto& [rule, id] : kRuleIds) {
    if (rule == r) return id;
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view id) {
  for (const auto& [rule, name] : kRuleIds) {
    if (name == id) return rule;
  }
  return std::nullopt;
}

const std::set<std::string>& default_verb_lexicon() {
  static const std::set<std::string> kLexicon(kVerbs.begin(), kVerbs.end());
  return kLexicon;
}

std::set<std::string> load_verb_lexicon(const std::filesystem::path& path) {
  std::set<std::string> out;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string word = lower(trim(line));
    if (!word.empty()) out.insert(word);
  }
  return out;
}

FilterConfig FilterConfig::load(const std::filesystem::path& path) {
  FilterConfig cfg;
  std::istringstream in(read_text_file(path));
  std::string line;
  int line_no = 0;
  auto bad = [&](const std::string& what) {
    throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  auto to_size = [&](const std::string& v) {
    try {
      std::size_t used = 0;
      long long x = std::stoll(v, &used);
      if (used != v.size() || x < 0) bad("expected a non-negative integer");
      return static_cast<std::size_t>(x);
    } catch (const std::logic_error&) {
      bad("expected a non-negative integer");
    }
    return std::size_t{0};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) bad("expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "min_tokens") {
      cfg.min_tokens = to_size(value);
    } else if (key == "max_tokens") {
      cfg.max_tokens = to_size(value);
    } else if (key == "max_non_ascii_ratio") {
      try {
        cfg.max_non_ascii_ratio = std::stod(value);
      } catch (const std::logic_error&) {
        bad("expected a number");
      }
    } else if (key == "merge_prefixes") {
      cfg.merge_prefixes.clear();
      for (auto& p : comma_list(value)) cfg.merge_prefixes.push_back(lower(p));
    } else if (key == "lexicon") {
      std::filesystem::path lex(value);
      if (lex.is_relative()) lex = path.parent_path() / lex;
      cfg.verbs = load_verb_lexicon(lex);
    } else if (key == "disable") {
      for (const auto& id : comma_list(value)) {
        auto rule = parse_rule(id);
        if (!rule) bad("unknown rule '" + id + "'");
        cfg.disabled.insert(*rule);
      }
    } else {
      bad("unknown key '" + key + "'");
    }
  }
  return cfg;
}

FilterVerdict filter_message(std::string_view message, const FilterConfig& cfg) {
  FilterVerdict v;
  auto fire = [&](Rule r) {
    if (cfg.enabled(r)) v.reasons.push_back(r);
  };
  const auto tokens = whitespace_tokens(message);
  const std::string lowered = lower(trim(message));

  if (tokens.size() < cfg.min_tokens) fire(Rule::TooShort);
  if (tokens.size() > cfg.max_tokens) fire(Rule::TooLong);
  for (const auto& prefix : cfg.merge_prefixes) {
    if (lowered.rfind(prefix, 0) == 0) {
      fire(Rule::MergeRevert);
      break;
    }
  }
  if (lowered.find("[bot]") != std::string::npos || is_pr_reference_only(message)) {
    fire(Rule::Bot);
  }
  if (tokens.empty() || !cfg.verbs.count(bare_word(tokens.front()))) fire(Rule::NonVerbStart);
  if (non_ascii_ratio(message) > cfg.max_non_ascii_ratio) fire(Rule::NonAsciiMajority);
  return v;
}

FilterVerdict filter_commit(const CommitRecord& rec, const FilterConfig& cfg) {
  FilterVerdict v;
  const std::filesystem::path path(rec.path);
  if (path.extension() != ".java") {
    if (cfg.enabled(Rule::JavaOnly)) {
      v.reasons.push_back(Rule::JavaOnly);
      return v;
    }
  }
  if (!cfg.enabled(Rule::ParseFail)) return v;
  for (const std::string* text : {&rec.old_text, &rec.new_text}) {
    if (text->empty()) continue;
    try {
      cpg::parse_source(cpg::SourceUnit{rec.path, *text, cpg::kMiniJava});
    } catch (const Error&) {
      v.reasons.push_back(Rule::ParseFail);
      break;
    }
  }
  return v;
}

Corpus filter_corpus(const Corpus& corpus, const FilterConfig& cfg) {
  Corpus out;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const CommitRecord& rec = corpus.records[i];
    if (!filter_commit(rec, cfg).accepted() || !filter_message(rec.message, cfg).accepted()) {
      continue;
    }
    out.records.push_back(rec);
    if (i < corpus.split.size()) out.split.push_back(corpus.split[i]);
  }
  return out;
}

}  // namespace deltamsg::corpus
