#pragma once

#include <chrono>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "narrclass/backend.hpp"

namespace narrclass {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double jitter = 0.25;  // delay is scaled by a factor drawn from [1 - jitter, 1 + jitter]

  // Backoff before attempt `attempt + 1` (attempt counts from 1), without jitter.
  std::chrono::milliseconds backoff(int attempt) const;
};

struct HttpBackendConfig {
  std::string endpoint = "https://api.openai.com/v1";  // POST {endpoint}/chat/completions
  std::string api_key;
  std::string system_message;  // sent as a leading system message when non-empty
  RetryPolicy retry;
  std::chrono::seconds timeout{60};
};

// OpenAI-compatible chat-completions client.
class HttpBackend : public CompletionBackend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpBackend(HttpBackendConfig config, Sleeper sleeper = {});

  CompletionResponse complete(const CompletionRequest& request) override;

  nlohmann::json request_body(const CompletionRequest& request) const;
  static CompletionResponse parse_response_body(const std::string& body);

 private:
  HttpBackendConfig config_;
  std::string origin_;     // scheme://host[:port]
  std::string base_path_;  // path prefix, e.g. "/v1"
  Sleeper sleeper_;
};

}  // namespace narrclass
