#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace narrclass {

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 256;
  std::string model;

  // Throws std::invalid_argument unless temperature is in [0, 2] and max_tokens >= 1.
  void validate() const;
};

struct TokenUsage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long total_tokens = 0;
};

struct CompletionResponse {
  std::string text;
  std::optional<TokenUsage> usage;
  std::chrono::milliseconds latency{0};
};

enum class BackendErrorKind {
  Network,    // transport failure, timeout, 429 or 5xx after the retry budget
  Auth,       // 401 / 403, never retried
  Client,     // other 4xx, never retried
  Malformed,  // 2xx with a body we cannot read
  Invalid,    // request failed local validation
};

const char* to_string(BackendErrorKind kind);

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrorKind kind, const std::string& what, int attempts = 1)
      : std::runtime_error(what), kind_(kind), attempts_(attempts) {}

  BackendErrorKind kind() const { return kind_; }
  int attempts() const { return attempts_; }

 private:
  BackendErrorKind kind_;
  int attempts_;
};

// Implementations must be safe to call from several threads at once.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

struct BatchItem {
  std::optional<CompletionResponse> response;
  std::optional<BackendError> error;

  bool ok() const { return response.has_value(); }
};

// Runs at most `parallelism` requests concurrently; result i belongs to
// request i. Per-item failures are captured in place, never rethrown.
std::vector<BatchItem> complete_batch(CompletionBackend& backend,
                                      std::span<const CompletionRequest> requests, int parallelism);

}  // namespace narrclass
