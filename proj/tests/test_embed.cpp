// Copyright 2026 The Hydra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

#include "hydra/corpus.hpp"
#include "hydra/embed.hpp"
#include "hydra/error.hpp"
#include "hydra/remote_embedder.hpp"
#include "test_util.hpp"

using namespace std::chrono_literals;

namespace {

hydra::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const hydra::Error& e) {
    return e.code();
  }
  FAIL("expected hydra::Error");
  return hydra::ErrorCode::kInternal;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// In-process stand-in for the embedding bridge, speaking its JSON contract.
class MockBridge {
 public:
  MockBridge() {
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++in_flight_;
      int seen = peak_.load();
      while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
      }
      ++requests_;
      handle(req, res);
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockBridge() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::string mode = "ok";
  std::chrono::milliseconds delay{0};
  std::atomic<int> requests_{0};
  std::atomic<int> peak_{0};

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      res.status = 400;
      res.set_content(R"({"error": "malformed body"})", "application/json");
      return;
    }
    const std::string id = body.value("id", "");
    const std::string code = body.value("code", "");
    if (code.empty()) {
      res.status = 422;
      res.set_content(R"({"error": "empty code"})", "application/json");
      return;
    }
    std::vector<double> v(hydra::kEmbeddingDim, 0.0);
    v[code.size() % hydra::kEmbeddingDim] = 1.0;
    std::size_t len = hydra::kEmbeddingDim;
    std::string echoed = id;
    if (mode == "short") len = 100;
    if (mode == "wrong_id") echoed = id + "-other";
    if (mode == "not_json") {
      res.set_content("<html>", "text/html");
      return;
    }
    if (mode == "server_error") {
      res.status = 500;
      res.set_content(R"({"error": "model not loaded"})", "application/json");
      return;
    }
    v.resize(len);
    res.set_content(nlohmann::json{{"id", echoed}, {"vector", v}, {"model", "mock:mean"}}.dump(),
                    "application/json");
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> in_flight_{0};
};

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("tokenize collapses literals and splits defs from uses") {
  const auto ts = hydra::tokenize("int n = 42;\nchar c = 'x';\nputs(\"hi\");\nn += c;\n");
  CHECK(std::count(ts.tokens.begin(), ts.tokens.end(), "<num>") == 1);
  CHECK(std::count(ts.tokens.begin(), ts.tokens.end(), "<chr>") == 1);
  CHECK(std::count(ts.tokens.begin(), ts.tokens.end(), "<str>") == 1);
  auto names = [](const auto& list) {
    std::vector<std::string> out;
    for (const auto& [n, pos] : list) out.push_back(n);
    return out;
  };
  CHECK(names(ts.defs) == std::vector<std::string>{"n", "c", "n"});
  CHECK(names(ts.uses) == std::vector<std::string>{"puts", "c"});
  for (std::size_t i = 1; i < ts.defs.size(); ++i) CHECK(ts.defs[i - 1].second < ts.defs[i].second);
}

TEST_CASE("stable_hash is pinned across platforms") {
  CHECK(hydra::stable_hash("", 0) == hydra::stable_hash("", 0));
  CHECK(hydra::stable_hash("abc", 1) != hydra::stable_hash("abc", 2));
  CHECK(hydra::stable_hash("abc", 1) != hydra::stable_hash("abd", 1));
  // Reference values computed outside the library (FNV-1a, then the
  // splitmix64 finalizer). A change here invalidates every stored model.
  CHECK(hydra::stable_hash("", 0) == 0xf52a15e9a9b5e89bULL);
  CHECK(hydra::stable_hash("token", 7) == 0xadfbb89b870b9878ULL);
}

TEST_CASE("hashed embedding shape and normalisation") {
  const auto empty = hydra::embed_hashed(hydra::tokenize(""));
  CHECK(empty.size() == hydra::kEmbeddingDim);
  CHECK(norm(empty) == 0.0);

  // One token gives one unigram feature: a signed one-hot vector.
  const auto one = hydra::embed_hashed(hydra::tokenize("x"));
  CHECK(std::count_if(one.begin(), one.end(), [](double v) { return v != 0.0; }) == 1);
  CHECK(std::fabs(*std::max_element(one.begin(), one.end(), [](double a, double b) {
          return std::fabs(a) < std::fabs(b);
        })) == doctest::Approx(1.0));

  const auto v = hydra::embed_hashed(hydra::tokenize(hydra::normalize(testutil::fixture("h1_missing_null_check.c"))));
  CHECK(v.size() == hydra::kEmbeddingDim);
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }));
}

TEST_CASE("hashed embedding reflects code similarity") {
  const auto a = hydra::embed_hashed(hydra::tokenize("int f(int *p)\n{\n return p->x + 1;\n}\n"));
  const auto b = hydra::embed_hashed(hydra::tokenize("int g(int *q)\n{\n return q->x + 1;\n}\n"));
  const auto c = hydra::embed_hashed(hydra::tokenize("while (i < n) { sum += table[i++]; }"));
  CHECK(hydra::cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(hydra::cosine_similarity(a, b) > hydra::cosine_similarity(a, c));
  CHECK(hydra::cosine_similarity(a, std::vector<double>(hydra::kEmbeddingDim, 0.0)) == 0.0);
}

TEST_CASE("provider truncates long inputs and embed_corpus keeps order") {
  hydra::Corpus corpus;
  for (int i = 0; i < 6; ++i)
    corpus.records.push_back(hydra::make_record("f" + std::to_string(i), "p", {}, "int v" + std::to_string(i) + " = " + std::to_string(i) + ";"));
  const hydra::HashedEmbeddingProvider provider;
  const auto serial = hydra::embed_corpus(provider, corpus, 1);
  const auto threaded = hydra::embed_corpus(provider, corpus, 3);
  REQUIRE(serial.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(serial[i].function_id == corpus.records[i].id);
    CHECK(serial[i].provider_id == "hashed-ngram-v1");
    CHECK(serial[i].values == threaded[i].values);
  }

  const auto rec = hydra::make_record("long", "p", {}, "a b c d e f g h");
  const hydra::HashedEmbeddingProvider capped(3);
  CHECK(capped.embed(rec).values == hydra::embed_hashed(hydra::tokenize("a b c")));
}

TEST_CASE("endpoint parsing") {
  const auto ep = hydra::parse_endpoint("http://bridge.local:8081/v1/");
  CHECK(ep.host == "bridge.local");
  CHECK(ep.port == 8081);
  CHECK(ep.base_path == "/v1");
  CHECK(hydra::parse_endpoint("http://h").port == 80);
  CHECK(code_of([] { hydra::parse_endpoint("ftp://h"); }) == hydra::ErrorCode::kInvalidArgument);
}

TEST_CASE("remote client speaks the bridge contract") {
  MockBridge bridge;
  const auto rec = hydra::make_record("fn-1", "p", {}, "int f(void) { return 0; }");
  const auto e = hydra::embed_remote(rec, bridge.url(), 2000ms);
  CHECK(e.function_id == "fn-1");
  CHECK(e.provider_id == "mock:mean");
  REQUIRE(e.values.size() == hydra::kEmbeddingDim);
  CHECK(e.values[rec.normalized_source.size() % hydra::kEmbeddingDim] == 1.0);

  bridge.mode = "short";
  CHECK(code_of([&] { hydra::embed_remote(rec, bridge.url(), 2000ms); }) == hydra::ErrorCode::kBridgeBadResponse);
  bridge.mode = "wrong_id";
  CHECK(code_of([&] { hydra::embed_remote(rec, bridge.url(), 2000ms); }) == hydra::ErrorCode::kBridgeBadResponse);
  bridge.mode = "not_json";
  CHECK(code_of([&] { hydra::embed_remote(rec, bridge.url(), 2000ms); }) == hydra::ErrorCode::kBridgeBadResponse);
  bridge.mode = "server_error";
  CHECK(code_of([&] { hydra::embed_remote(rec, bridge.url(), 2000ms); }) == hydra::ErrorCode::kBridgeBadResponse);

  bridge.mode = "ok";
  const auto empty = hydra::make_record("fn-2", "p", {}, "");
  CHECK(code_of([&] { hydra::embed_remote(empty, bridge.url(), 2000ms); }) == hydra::ErrorCode::kBridgeBadResponse);
}

TEST_CASE("remote client timeouts and unreachable bridges") {
  const auto rec = hydra::make_record("fn", "p", {}, "int x;");
  {
    MockBridge slow;
    slow.delay = 600ms;
    CHECK(code_of([&] { hydra::embed_remote(rec, slow.url(), 150ms); }) == hydra::ErrorCode::kTimeout);
  }
  // Nothing listens on port 1, so the connection is refused outright.
  CHECK(code_of([&] { hydra::embed_remote(rec, "http://127.0.0.1:1", 500ms); }) ==
        hydra::ErrorCode::kBridgeUnreachable);
}

TEST_CASE("remote provider bounds requests in flight") {
  MockBridge bridge;
  bridge.delay = 30ms;
  hydra::Corpus corpus;
  for (int i = 0; i < 12; ++i) corpus.records.push_back(hydra::make_record("r" + std::to_string(i), "p", {}, "int a" + std::to_string(i) + ";"));
  const hydra::RemoteEmbeddingProvider provider(bridge.url(), 2000ms, 2);
  CHECK(provider.id() == "remote:" + bridge.url());
  CHECK(provider.is_remote());
  const auto out = hydra::embed_corpus(provider, corpus, 8);
  REQUIRE(out.size() == 12);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].function_id == corpus.records[i].id);
  CHECK(bridge.requests_ == 12);
  CHECK(bridge.peak_ <= 2);
}

}  // TEST_SUITE
