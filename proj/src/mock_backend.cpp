#include "narrclass/mock_backend.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

namespace narrclass {
namespace {

BackendErrorKind parse_kind(const std::string& s) {
  if (s == "network") return BackendErrorKind::Network;
  if (s == "auth") return BackendErrorKind::Auth;
  if (s == "client") return BackendErrorKind::Client;
  if (s == "malformed") return BackendErrorKind::Malformed;
  throw std::invalid_argument("unknown mock error kind '" + s + "'");
}

}  // namespace

MockScript MockScript::from_json(const nlohmann::json& doc) {
  MockScript script;
  if (!doc.is_object()) throw std::invalid_argument("mock script must be a JSON object");
  if (doc.contains("default")) script.default_response = doc.at("default").get<std::string>();
  if (doc.contains("rules")) {
    for (const auto& jr : doc.at("rules")) {
      MockRule rule;
      const auto& c = jr.at("contains");
      if (c.is_string()) {
        rule.contains.push_back(c.get<std::string>());
      } else {
        rule.contains = c.get<std::vector<std::string>>();
      }
      rule.response = jr.value("response", std::string{});
      if (jr.contains("error")) rule.fail = parse_kind(jr.at("error").get<std::string>());
      script.rules.push_back(std::move(rule));
    }
  }
  return script;
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mock script " + path.string());
  return from_json(nlohmann::json::parse(in));
}

CompletionResponse MockBackend::complete(const CompletionRequest& request) {
  const int now = ++in_flight_;
  int prev = max_in_flight_.load();
  while (now > prev && !max_in_flight_.compare_exchange_weak(prev, now)) {
  }

  std::optional<std::size_t> matched;
  for (std::size_t i = 0; i < script_.rules.size(); ++i) {
    const auto& needles = script_.rules[i].contains;
    if (std::all_of(needles.begin(), needles.end(), [&](const std::string& n) {
          return request.prompt.find(n) != std::string::npos;
        })) {
      matched = i;
      break;
    }
  }
  {
    std::lock_guard lock(mu_);
    log_.push_back({request.prompt, request.temperature, matched});
  }
  if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
  --in_flight_;

  if (matched) {
    const auto& rule = script_.rules[*matched];
    if (rule.fail) {
      throw BackendError(*rule.fail, "scripted failure (rule " + std::to_string(*matched) + ")");
    }
    return {rule.response, std::nullopt, {}};
  }
  return {script_.default_response, std::nullopt, {}};
}

std::vector<MockCall> MockBackend::calls() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t MockBackend::call_count() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

void MockBackend::reset_log() {
  std::lock_guard lock(mu_);
  log_.clear();
  max_in_flight_ = 0;
}

}  // namespace narrclass
