#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "narrclass/backend.hpp"

namespace narrclass::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3, kBackendError = 4, kPartialFailure = 5 };

inline constexpr std::uint64_t kDefaultSeed = 20250101;

struct BackendSettings {
  std::string kind = "http";  // "http" or "mock"
  std::string mock_script;
  std::string endpoint;  // empty: $NARRCLASS_ENDPOINT, then the public default
  std::string model = "gpt-4o-mini";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string system_message;
  int parallelism = 4;
  int retries = 3;
  int retry_base_ms = 500;
  int timeout_s = 60;
  double temperature = 0.0;
  int max_tokens = 256;
};

std::unique_ptr<CompletionBackend> make_backend(const BackendSettings& settings);

// Entry point behind the `narrclass` binary; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace narrclass::cli
