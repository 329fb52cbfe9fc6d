#include <doctest.h>

#include <chrono>

#include "narrclass/mock_backend.hpp"

using namespace narrclass;

namespace {

CompletionRequest req(std::string prompt) { return {std::move(prompt), 0.0, 256, "mock"}; }

}  // namespace

TEST_CASE("mock answers from the first matching rule, else the default") {
  MockScript script;
  script.rules.push_back({{"classify it into one of the two categories"}, "Climate Change", {}});
  script.rules.push_back({{"two categories"}, "never reached", {}});
  script.default_response = "fallback";
  MockBackend mock(script);

  CHECK(mock.complete(req("... classify it into one of the two categories: ...")).text == "Climate Change");
  CHECK(mock.complete(req("something else")).text == "fallback");

  auto calls = mock.calls();
  REQUIRE(calls.size() == 2);
  CHECK(calls[0].rule == std::optional<std::size_t>{0});
  CHECK_FALSE(calls[1].rule.has_value());
}

TEST_CASE("mock rules with several substrings need all of them") {
  MockScript script;
  script.rules.push_back({{"alpha", "beta"}, "both", {}});
  MockBackend mock(script);
  CHECK(mock.complete(req("alpha only")).text == "Other");
  CHECK(mock.complete(req("beta and alpha")).text == "both");
}

TEST_CASE("mock script JSON and scripted failures") {
  auto script = MockScript::from_json(nlohmann::json::parse(R"({
    "rules": [{"contains": "boom", "error": "auth"}, {"contains": ["a", "b"], "response": "ab"}],
    "default": "d"})"));
  MockBackend mock(script);
  CHECK(mock.complete(req("xaby")).text == "ab");
  try {
    mock.complete(req("boom"));
    FAIL("expected an error");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::Auth);
  }
  CHECK_THROWS_AS(MockScript::from_json(nlohmann::json::parse(R"({"rules":[{"contains":"x","error":"??"}]})")),
                  std::invalid_argument);
}

TEST_CASE("mock is deterministic across identical runs") {
  MockScript script;
  script.rules.push_back({{"1"}, "one", {}});
  std::vector<std::string> responses[2];
  std::vector<MockCall> logs[2];
  for (int run = 0; run < 2; ++run) {
    MockBackend mock(script);
    for (auto p : {"a1", "b2", "c1"}) responses[run].push_back(mock.complete(req(p)).text);
    logs[run] = mock.calls();
  }
  CHECK(responses[0] == responses[1]);
  REQUIRE(logs[0].size() == logs[1].size());
  for (std::size_t i = 0; i < logs[0].size(); ++i) {
    CHECK(logs[0][i].prompt == logs[1][i].prompt);
    CHECK(logs[0][i].rule == logs[1][i].rule);
  }
}

TEST_CASE("request validation") {
  CHECK_THROWS_AS((CompletionRequest{"p", 2.5, 10, "m"}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CompletionRequest{"p", -0.1, 10, "m"}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CompletionRequest{"p", 1.0, 0, "m"}.validate()), std::invalid_argument);
  CHECK_NOTHROW((CompletionRequest{"p", 2.0, 1, "m"}.validate()));
}

TEST_CASE("complete_batch sequential keeps order") {
  MockScript script;
  script.rules.push_back({{"b"}, "B", {}});
  MockBackend mock(script);
  std::vector<CompletionRequest> reqs{req("a"), req("b"), req("c")};
  auto out = complete_batch(mock, reqs, 1);
  REQUIRE(out.size() == 3);
  CHECK(out[0].response->text == "Other");
  CHECK(out[1].response->text == "B");
  CHECK(mock.calls()[2].prompt == "c");
  CHECK(mock.max_in_flight() == 1);
}

TEST_CASE("complete_batch with parallelism 8 returns 100 ordered responses") {
  MockScript script;
  for (int i = 0; i < 100; ++i) {
    script.rules.push_back({{"<" + std::to_string(i) + ">"}, "resp" + std::to_string(i), {}});
  }
  MockBackend mock(script, std::chrono::microseconds(200));
  std::vector<CompletionRequest> reqs;
  for (int i = 0; i < 100; ++i) reqs.push_back(req("<" + std::to_string(i) + ">"));
  auto out = complete_batch(mock, reqs, 8);
  REQUIRE(out.size() == 100);
  for (int i = 0; i < 100; ++i) {
    REQUIRE(out[static_cast<std::size_t>(i)].ok());
    CHECK(out[static_cast<std::size_t>(i)].response->text == "resp" + std::to_string(i));
  }
  CHECK(mock.call_count() == 100);
  CHECK(mock.max_in_flight() <= 8);
}

TEST_CASE("complete_batch reports failures positionally") {
  MockScript script;
  script.rules.push_back({{"<42>"}, "", BackendErrorKind::Network});
  MockBackend mock(script);
  std::vector<CompletionRequest> reqs;
  for (int i = 0; i < 100; ++i) reqs.push_back(req("<" + std::to_string(i) + ">"));
  reqs[7].max_tokens = 0;  // fails validation locally
  auto out = complete_batch(mock, reqs, 4);
  std::size_t ok = 0;
  for (const auto& item : out) ok += item.ok();
  CHECK(ok == 98);
  REQUIRE(out[42].error.has_value());
  CHECK(out[42].error->kind() == BackendErrorKind::Network);
  REQUIRE(out[7].error.has_value());
  CHECK(out[7].error->kind() == BackendErrorKind::Invalid);
  CHECK_THROWS_AS(complete_batch(mock, reqs, 0), std::invalid_argument);
}
