#include "deltamsg/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "deltamsg/errors.hpp"
#include "deltamsg/hash.hpp"
#include "deltamsg/io.hpp"
#include "json.hpp"

namespace deltamsg::corpus {

using nlohmann::json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train:
      return "train";
    case Split::Valid:
      return "valid";
    case Split::Test:
      return "test";
  }
  return "?";
}

std::vector<const CommitRecord*> Corpus::in_split(Split s) const {
  std::vector<const CommitRecord*> out;
  for (std::size_t i = 0; i < records.size() && i < split.size(); ++i) {
    if (split[i] == s) out.push_back(&records[i]);
  }
  return out;
}

std::string first_line(std::string_view raw) {
  std::size_t end = raw.find('\n');
  std::string_view line = raw.substr(0, end);
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; };
  while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
  while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
  return std::string(line);
}

namespace {

// Returns an empty string on success, otherwise the reason the line was
// rejected.
std::string parse_record(std::string_view line, CommitRecord& out) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    return "invalid JSON";
  }
  if (!j.is_object()) return "not an object";
  auto get = [&](const char* field, std::string& dst, bool required) -> std::string {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) return required ? std::string("missing ") + field : "";
    if (!it->is_string()) return std::string(field) + " is not a string";
    dst = it->get<std::string>();
    return "";
  };
  for (auto [field, dst, required] :
       {std::tuple{"repo", &out.repo, true}, std::tuple{"sha", &out.sha, true},
        std::tuple{"path", &out.path, true}, std::tuple{"message_raw", &out.message_raw, true},
        std::tuple{"old_text", &out.old_text, false},
        std::tuple{"new_text", &out.new_text, false},
        std::tuple{"diff_text", &out.diff_text, false}}) {
    if (std::string err = get(field, *dst, required); !err.empty()) return err;
  }
  if (out.old_text.empty() && out.new_text.empty()) return "both old_text and new_text empty";
  out.message = first_line(out.message_raw);
  return "";
}

}  // namespace

Corpus parse_corpus(std::string_view text, LoadReport* report) {
  Corpus corpus;
  LoadReport local;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view() : text.substr(end + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    ++local.lines;
    CommitRecord rec;
    if (std::string err = parse_record(line, rec); !err.empty()) {
      ++local.malformed;
      local.warnings.push_back("line " + std::to_string(line_no) + ": " + err);
      continue;
    }
    corpus.records.push_back(std::move(rec));
  }
  if (local.malformed * 10 > local.lines) {
    throw FormatError("", std::to_string(local.malformed) + " of " + std::to_string(local.lines) +
                              " lines malformed; not a commit corpus?");
  }
  if (report) *report = std::move(local);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, LoadReport* report) {
  return parse_corpus(read_text_file(path), report);
}

std::string record_to_jsonl(const CommitRecord& r) {
  json j{{"repo", r.repo},         {"sha", r.sha},           {"path", r.path},
         {"message_raw", r.message_raw}, {"old_text", r.old_text}, {"new_text", r.new_text},
         {"diff_text", r.diff_text}};
  return j.dump();
}

std::array<std::size_t, 3> split_sizes(std::size_t n, SplitRatios ratios) {
  const std::array<double, 3> r{ratios.train, ratios.valid, ratios.test};
  for (double x : r) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidRatio("split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw InvalidRatio("split ratios must sum to 1");
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = r[i] * static_cast<double>(n);
    double whole = std::floor(exact + 1e-9);
    sizes[i] = static_cast<std::size_t>(whole);
    frac[i] = exact - whole;
    assigned += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

Corpus split_corpus(Corpus corpus, SplitRatios ratios, std::uint64_t seed, bool by_repo) {
  const std::size_t n = corpus.records.size();
  const auto sizes = split_sizes(n, ratios);
  corpus.split.assign(n, Split::Train);
  constexpr std::array<Split, 3> kSplits{Split::Train, Split::Valid, Split::Test};

  if (!by_repo) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
      keys[i] = seeded_hash(seed, corpus.records[i].repo, corpus.records[i].sha);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::size_t pos = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t k = 0; k < sizes[s]; ++k) corpus.split[order[pos++]] = kSplits[s];
    }
    return corpus;
  }

  // Shuffle repositories, then fill splits in order; a repository goes to the
  // first split whose target is not yet met.
  std::map<std::string, std::vector<std::size_t>> by_name;
  for (std::size_t i = 0; i < n; ++i) by_name[corpus.records[i].repo].push_back(i);
  std::vector<std::pair<std::uint64_t, const std::string*>> repos;
  for (const auto& [name, members] : by_name) repos.emplace_back(seeded_hash(seed, name), &name);
  std::sort(repos.begin(), repos.end(),
            [](const auto& a, const auto& b) { return std::tie(a.first, *a.second) < std::tie(b.first, *b.second); });
  std::array<std::size_t, 3> filled{};
  for (const auto& [h, name] : repos) {
    int s = 0;
    while (s < 2 && filled[s] >= sizes[s]) ++s;
    for (std::size_t i : by_name[*name]) corpus.split[i] = kSplits[s];
    filled[s] += by_name[*name].size();
  }
  return corpus;
}

}  // namespace deltamsg::corpus
