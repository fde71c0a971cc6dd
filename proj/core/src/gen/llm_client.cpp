#include "deltamsg/gen/llm_client.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <regex>
#include <thread>

#include "deltamsg/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace deltamsg::gen {

namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;
  std::string path;
  bool https = false;
};

std::optional<ParsedUrl> parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?)://([^/:?#]+)(:[0-9]+)?(/[^#]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) return std::nullopt;
  ParsedUrl p;
  p.https = m[1] == "https";
  p.origin = m[1].str() + "://" + m[2].str() + m[3].str();
  p.path = m[4].matched ? m[4].str() : "/";
  return p;
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

json parse_object(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError(std::string(what) + " is not a JSON object");
  return j;
}

std::string request_body(std::string_view prompt, const EndpointConfig& c) {
  json body = parse_object(c.body_template, "body_template");
  const json extra = parse_object(c.extra_params, "extra_params");
  for (const auto& [k, v] : extra.items()) body[k] = v;
  try {
    body[json::json_pointer(c.model_pointer)] = c.model;
    body[json::json_pointer(c.prompt_pointer)] = std::string(prompt);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("request field path: ") + e.what());
  }
  return body.dump();
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

EndpointConfig EndpointConfig::from_env() {
  EndpointConfig c;
  c.url = env_or_empty("DELTAMSG_LLM_URL");
  c.token = env_or_empty("DELTAMSG_LLM_TOKEN");
  c.model = env_or_empty("DELTAMSG_LLM_MODEL");
  return c;
}

void EndpointConfig::validate() const {
  if (url.empty()) throw ConfigError("LLM endpoint URL is not set (DELTAMSG_LLM_URL)");
  if (token.empty()) throw ConfigError("LLM auth token is not set (DELTAMSG_LLM_TOKEN)");
  if (model.empty()) throw ConfigError("LLM model id is not set (DELTAMSG_LLM_MODEL)");
  const auto p = parse_url(url);
  if (!p) throw ConfigError("malformed LLM endpoint URL: " + url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (p->https) throw ConfigError("https endpoints need a build with OpenSSL");
#endif
  if (max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
  parse_object(body_template, "body_template");
  parse_object(extra_params, "extra_params");
}

std::string llm_complete(std::string_view prompt, const EndpointConfig& config, std::size_t index) {
  config.validate();
  const ParsedUrl url = *parse_url(config.url);
  const std::string body = request_body(prompt, config);

  httplib::Client client(url.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  const httplib::Headers headers{{"Authorization", "Bearer " + config.token}};

  std::string last_problem;
  auto delay = config.backoff;
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
      last_problem = "network error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError(index, "endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    }
    if (retryable(res->status)) {
      last_problem = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw TransportError(index, "HTTP " + std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw MalformedResponse(index, "response is not JSON");
    const json::json_pointer ptr(config.output_pointer);
    if (!reply.contains(ptr) || !reply[ptr].is_string()) {
      throw MalformedResponse(index, "no text at " + config.output_pointer);
    }
    return reply[ptr].get<std::string>();
  }
  throw TransportError(index, "giving up after " + std::to_string(config.max_attempts) +
                                  " attempts, last: " + last_problem);
}

std::vector<CandidateMessage> llm_generate_each(const std::vector<std::string>& prompts,
                                                const EndpointConfig& config, PromptSetting setting) {
  config.validate();
  const std::size_t n = prompts.size();
  std::vector<std::string> texts(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        std::string text = clamp_message(llm_complete(prompts[i], config, i));
        if (text.empty()) throw MalformedResponse(i, "response text is blank");
        texts[i] = std::move(text);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(config.max_concurrency, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<CandidateMessage> out;
  out.reserve(n);
  for (auto& t : texts) out.push_back({std::move(t), Backend::Llm, setting, std::nullopt});
  return out;
}

std::vector<CandidateMessage> llm_generate(std::string_view prompt, const EndpointConfig& config,
                                           std::size_t n, PromptSetting setting) {
  return llm_generate_each(std::vector<std::string>(n, std::string(prompt)), config, setting);
}

}  // namespace deltamsg::gen
