#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "narrclass/backend.hpp"

namespace narrclass {

struct MockRule {
  std::vector<std::string> contains;  // matches when the prompt contains every substring
  std::string response;
  std::optional<BackendErrorKind> fail;  // raise instead of answering
};

// Ordered rules, first match wins; `default_response` otherwise.
struct MockScript {
  std::vector<MockRule> rules;
  std::string default_response = "Other";

  // {"rules": [{"contains": "..." | ["...", ...], "response": "...", "error": "network"}],
  //  "default": "..."}
  static MockScript from_json(const nlohmann::json& doc);
  static MockScript load(const std::filesystem::path& path);
};

struct MockCall {
  std::string prompt;
  double temperature = 0.0;
  std::optional<std::size_t> rule;  // index of the matching rule, if any
};

class MockBackend : public CompletionBackend {
 public:
  explicit MockBackend(MockScript script, std::chrono::microseconds delay = {})
      : script_(std::move(script)), delay_(delay) {}

  CompletionResponse complete(const CompletionRequest& request) override;

  // Calls in arrival order; only deterministic for sequential callers.
  std::vector<MockCall> calls() const;
  std::size_t call_count() const;
  int max_in_flight() const { return max_in_flight_.load(); }
  void reset_log();

 private:
  MockScript script_;
  std::chrono::microseconds delay_;
  mutable std::mutex mu_;
  std::vector<MockCall> log_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
};

}  // namespace narrclass
