#include "narrclass/http_backend.hpp"

#include <cmath>
#include <random>
#include <thread>

#include <httplib.h>

namespace narrclass {
namespace {

using json = nlohmann::json;

bool is_transient_status(int status) { return status == 429 || (status >= 500 && status <= 599); }

double jitter_factor(double jitter) {
  if (jitter <= 0.0) return 1.0;
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_real_distribution<double> dist(1.0 - jitter, 1.0 + jitter);
  return dist(rng);
}

}  // namespace

std::chrono::milliseconds RetryPolicy::backoff(int attempt) const {
  return std::chrono::milliseconds(
      static_cast<long long>(base_delay.count() * std::ldexp(1.0, std::max(0, attempt - 1))));
}

HttpBackend::HttpBackend(HttpBackendConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (config_.retry.max_attempts < 1) throw std::invalid_argument("retry attempts must be >= 1");
  std::string ep = config_.endpoint;
  while (!ep.empty() && ep.back() == '/') ep.pop_back();
  auto scheme_end = ep.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint needs a scheme: " + ep);
  auto path_start = ep.find('/', scheme_end + 3);
  origin_ = ep.substr(0, path_start);
  base_path_ = path_start == std::string::npos ? "" : ep.substr(path_start);
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

json HttpBackend::request_body(const CompletionRequest& request) const {
  json messages = json::array();
  if (!config_.system_message.empty()) {
    messages.push_back({{"role", "system"}, {"content", config_.system_message}});
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  return {{"model", request.model},
          {"messages", messages},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}};
}

CompletionResponse HttpBackend::parse_response_body(const std::string& body) {
  CompletionResponse out;
  try {
    auto doc = json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::runtime_error("content is not a string");
    out.text = content.get<std::string>();
    if (auto it = doc.find("usage"); it != doc.end() && it->is_object()) {
      out.usage = TokenUsage{it->value("prompt_tokens", 0L), it->value("completion_tokens", 0L),
                             it->value("total_tokens", 0L)};
    }
  } catch (const std::exception& e) {
    throw BackendError(BackendErrorKind::Malformed, std::string("malformed completion body: ") + e.what());
  }
  return out;
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
  request.validate();
  const std::string body = request_body(request).dump();
  const std::string path = base_path_ + "/chat/completions";

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

  std::string last_error;
  const int attempts = config_.retry.max_attempts;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(path, body, "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (res) {
      const int status = res->status;
      if (status >= 200 && status < 300) {
        auto out = parse_response_body(res->body);
        out.latency = elapsed;
        return out;
      }
      if (status == 401 || status == 403) {
        throw BackendError(BackendErrorKind::Auth, "authentication failed (HTTP " +
                                                       std::to_string(status) + ")", attempt);
      }
      if (!is_transient_status(status)) {
        throw BackendError(BackendErrorKind::Client,
                           "HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200), attempt);
      }
      last_error = "HTTP " + std::to_string(status);
    } else {
      last_error = httplib::to_string(res.error());
    }

    if (attempt < attempts) {
      auto delay = config_.retry.backoff(attempt);
      sleeper_(std::chrono::milliseconds(
          static_cast<long long>(delay.count() * jitter_factor(config_.retry.jitter))));
    }
  }
  throw BackendError(BackendErrorKind::Network,
                     "request failed after " + std::to_string(attempts) + " attempts: " + last_error,
                     attempts);
}

}  // namespace narrclass
