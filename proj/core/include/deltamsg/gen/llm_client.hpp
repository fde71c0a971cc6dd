#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "deltamsg/gen/candidate.hpp"

namespace deltamsg::gen {

// Any chat-completion style endpoint. The request body is `body_template`
// with the model id and the prompt written at the given JSON pointers and the
// keys of `extra_params` (a JSON object, e.g. sampling settings) merged in.
// The reply text is read from `output_pointer`.
struct EndpointConfig {
  std::string url;
  std::string token;
  std::string model;
  std::string body_template = R"({"messages":[{"role":"user","content":""}]})";
  std::string prompt_pointer = "/messages/0/content";
  std::string model_pointer = "/model";
  std::string output_pointer = "/choices/0/message/content";
  std::string extra_params = "{}";
  int max_attempts = 3;
  std::chrono::milliseconds backoff{250};
  std::chrono::milliseconds timeout{60000};
  std::size_t max_concurrency = 4;

  // DELTAMSG_LLM_URL, DELTAMSG_LLM_TOKEN, DELTAMSG_LLM_MODEL; missing
  // variables leave the fields empty.
  static EndpointConfig from_env();
  // Throws ConfigError when url, token or model is missing or malformed.
  void validate() const;
};

// Raw completion text for one request. Network failures, 429 and 5xx are
// retried up to max_attempts in total with doubling backoff, then raise
// TransportError; 401/403 raise AuthError; a reply without text at
// `output_pointer` raises MalformedResponse. Errors carry `index`.
std::string llm_complete(std::string_view prompt, const EndpointConfig& config, std::size_t index = 0);

// n independent requests for the same prompt, at most max_concurrency in
// flight. Results keep request order; on failure the lowest failing index
// is reported.
std::vector<CandidateMessage> llm_generate(std::string_view prompt, const EndpointConfig& config,
                                           std::size_t n, PromptSetting setting = PromptSetting::Zero);

// Runs one request per prompt with the same ordering and error rules.
std::vector<CandidateMessage> llm_generate_each(const std::vector<std::string>& prompts,
                                                const EndpointConfig& config, PromptSetting setting);

}  // namespace deltamsg::gen
