#include <doctest.h>

#include <atomic>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "narrclass/http_backend.hpp"

using namespace narrclass;
using namespace std::chrono_literals;

namespace {

// Local chat-completions stub that replays a list of status codes.
class StubServer {
 public:
  explicit StubServer(std::vector<int> statuses, std::string ok_body = default_body())
      : statuses_(std::move(statuses)), ok_body_(std::move(ok_body)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      bodies_.push_back(req.body);
      auth_.push_back(req.get_header_value("Authorization"));
      const std::size_t i = std::min(hits_++, statuses_.size() - 1);
      res.status = statuses_[i];
      res.set_content(res.status == 200 ? ok_body_ : std::string("{\"error\":\"x\"}"), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  static std::string default_body() {
    return R"({"choices":[{"message":{"role":"assistant","content":"Climate Change"}}],
               "usage":{"prompt_tokens":11,"completion_tokens":2,"total_tokens":13}})";
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }
  std::vector<std::string> bodies() const {
    std::lock_guard lock(mu_);
    return bodies_;
  }
  std::vector<std::string> auth() const {
    std::lock_guard lock(mu_);
    return auth_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::vector<int> statuses_;
  std::string ok_body_;
  mutable std::mutex mu_;
  std::size_t hits_ = 0;
  std::vector<std::string> bodies_;
  std::vector<std::string> auth_;
};

struct SleepLog {
  std::vector<std::chrono::milliseconds> delays;
  HttpBackend::Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) { delays.push_back(d); };
  }
};

HttpBackendConfig config_for(const StubServer& s) {
  HttpBackendConfig cfg;
  cfg.endpoint = s.endpoint();
  cfg.api_key = "sk-test";
  cfg.retry.jitter = 0.0;
  cfg.timeout = 5s;
  return cfg;
}

CompletionRequest req() { return {"hello", 0.0, 256, "llama-3.2-3b"}; }

}  // namespace

TEST_CASE("successful call posts the chat-completions body and reads the first choice") {
  StubServer server({200});
  auto cfg = config_for(server);
  HttpBackend backend(cfg);
  auto resp = backend.complete(req());
  CHECK(resp.text == "Climate Change");
  REQUIRE(resp.usage.has_value());
  CHECK(resp.usage->total_tokens == 13);

  auto body = nlohmann::json::parse(server.bodies().at(0));
  CHECK(body["model"] == "llama-3.2-3b");
  CHECK(body["temperature"] == 0.0);
  CHECK(body["max_tokens"] == 256);
  REQUIRE(body["messages"].size() == 1);
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "hello");
  CHECK(server.auth().at(0) == "Bearer sk-test");
}

TEST_CASE("optional system message goes first") {
  StubServer server({200});
  auto cfg = config_for(server);
  cfg.system_message = "You label news.";
  HttpBackend backend(cfg);
  backend.complete(req());
  auto body = nlohmann::json::parse(server.bodies().at(0));
  REQUIRE(body["messages"].size() == 2);
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][1]["role"] == "user");
}

TEST_CASE("HTTP 401 is an immediate auth error") {
  StubServer server({401});
  SleepLog sleeps;
  HttpBackend backend(config_for(server), sleeps.sleeper());
  try {
    backend.complete(req());
    FAIL("expected auth error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::Auth);
    CHECK(e.attempts() == 1);
  }
  CHECK(server.hits() == 1);
  CHECK(sleeps.delays.empty());
}

TEST_CASE("other 4xx are not retried") {
  StubServer server({400});
  SleepLog sleeps;
  HttpBackend backend(config_for(server), sleeps.sleeper());
  try {
    backend.complete(req());
    FAIL("expected client error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::Client);
  }
  CHECK(server.hits() == 1);
}

TEST_CASE("429 and 5xx are retried with exponential backoff") {
  StubServer server({429, 503, 200});
  SleepLog sleeps;
  auto cfg = config_for(server);
  cfg.retry.base_delay = 500ms;
  HttpBackend backend(cfg, sleeps.sleeper());
  CHECK(backend.complete(req()).text == "Climate Change");
  CHECK(server.hits() == 3);
  REQUIRE(sleeps.delays.size() == 2);
  CHECK(sleeps.delays[0] == 500ms);
  CHECK(sleeps.delays[1] == 1000ms);
}

TEST_CASE("persistent 5xx exhausts the attempt cap") {
  StubServer server({500});
  SleepLog sleeps;
  HttpBackend backend(config_for(server), sleeps.sleeper());
  try {
    backend.complete(req());
    FAIL("expected network error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::Network);
    CHECK(e.attempts() == 3);
  }
  CHECK(server.hits() == 3);
  CHECK(sleeps.delays.size() == 2);
}

TEST_CASE("jittered delays stay within the configured band") {
  StubServer server({500});
  SleepLog sleeps;
  auto cfg = config_for(server);
  cfg.retry.jitter = 0.25;
  cfg.retry.max_attempts = 4;
  HttpBackend backend(cfg, sleeps.sleeper());
  CHECK_THROWS_AS(backend.complete(req()), BackendError);
  REQUIRE(sleeps.delays.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double nominal = 500.0 * (1 << i);
    CHECK(sleeps.delays[i].count() >= static_cast<long>(nominal * 0.75) - 1);
    CHECK(sleeps.delays[i].count() <= static_cast<long>(nominal * 1.25) + 1);
  }
}

TEST_CASE("malformed 200 body is reported without retry") {
  StubServer server({200}, R"({"choices": []})");
  HttpBackend backend(config_for(server));
  try {
    backend.complete(req());
    FAIL("expected malformed error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::Malformed);
  }
  CHECK(server.hits() == 1);
}

TEST_CASE("connection failures are retried then surface as network errors") {
  // Grab a free port, then close it so nothing listens there.
  int port = 0;
  {
    httplib::Server tmp;
    port = tmp.bind_to_any_port("127.0.0.1");
  }
  HttpBackendConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.timeout = 1s;
  SleepLog sleeps;
  HttpBackend backend(cfg, sleeps.sleeper());
  try {
    backend.complete(req());
    FAIL("expected network error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::Network);
    CHECK(e.attempts() == 3);
  }
  CHECK(sleeps.delays.size() == 2);
}

TEST_CASE("endpoint parsing and response parsing") {
  CHECK_THROWS_AS(HttpBackend(HttpBackendConfig{"no-scheme", "", "", {}, 1s}), std::invalid_argument);
  auto parsed = HttpBackend::parse_response_body(R"({"choices":[{"message":{"content":"A#B"}}]})");
  CHECK(parsed.text == "A#B");
  CHECK_FALSE(parsed.usage.has_value());
  CHECK_THROWS_AS(HttpBackend::parse_response_body("not json"), BackendError);
}
