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

#include "hydra/remote_embedder.hpp"

#include <cmath>
#include <regex>

#include "httplib.h"
#include "json.hpp"

#include "hydra/error.hpp"

namespace hydra {

RemoteEndpoint parse_endpoint(const std::string& url) {
  static const std::regex kUrl(R"(^(http)://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl))
    fail(ErrorCode::kInvalidArgument, "unsupported endpoint URL: " + url);
  RemoteEndpoint ep;
  ep.scheme = m[1];
  ep.host = m[2];
  ep.port = m[3].matched ? std::stoi(m[3]) : 80;
  ep.base_path = m[4].matched ? std::string(m[4]) : "";
  while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  return ep;
}

Embedding embed_remote(const FunctionRecord& record, const std::string& endpoint,
                       std::chrono::milliseconds timeout) {
  const RemoteEndpoint ep = parse_endpoint(endpoint);
  httplib::Client client(ep.host, ep.port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const nlohmann::json body = {{"id", record.id}, {"code", record.normalized_source}};
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(ep.base_path + "/embed", body.dump(), "application/json");
  if (!res) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const httplib::Error err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= timeout * 9 / 10))
      fail(ErrorCode::kTimeout, "embedding bridge timed out after " +
                                    std::to_string(timeout.count()) + " ms");
    fail(ErrorCode::kBridgeUnreachable,
         "embedding bridge unreachable at " + endpoint + ": " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    std::string detail = res->body;
    try {
      const auto j = nlohmann::json::parse(res->body);
      if (j.contains("error") && j["error"].is_string()) detail = j["error"];
    } catch (const nlohmann::json::exception&) {
    }
    fail(ErrorCode::kBridgeBadResponse,
         "embedding bridge returned HTTP " + std::to_string(res->status) + ": " + detail);
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kBridgeBadResponse, std::string("malformed bridge response: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vector") || !j["vector"].is_array())
    fail(ErrorCode::kBridgeBadResponse, "bridge response lacks a vector");
  if (j.contains("id") && (!j["id"].is_string() || j["id"].get<std::string>() != record.id))
    fail(ErrorCode::kBridgeBadResponse, "bridge response id does not echo " + record.id);
  const auto& arr = j["vector"];
  if (arr.size() != kEmbeddingDim)
    fail(ErrorCode::kBridgeBadResponse, "bridge returned " + std::to_string(arr.size()) +
                                            " values, expected " +
                                            std::to_string(kEmbeddingDim));
  Embedding e;
  e.function_id = record.id;
  e.provider_id = j.contains("model") && j["model"].is_string() ? j["model"].get<std::string>()
                                                                : std::string("remote");
  e.values.reserve(kEmbeddingDim);
  for (const auto& x : arr) {
    if (!x.is_number()) fail(ErrorCode::kBridgeBadResponse, "non-numeric vector entry");
    const double v = x.get<double>();
    if (!std::isfinite(v)) fail(ErrorCode::kBridgeBadResponse, "non-finite vector entry");
    e.values.push_back(v);
  }
  return e;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string endpoint,
                                                 std::chrono::milliseconds timeout,
                                                 std::size_t max_in_flight)
    : endpoint_(std::move(endpoint)),
      timeout_(timeout),
      max_in_flight_(max_in_flight == 0 ? 1 : max_in_flight) {
  parse_endpoint(endpoint_);
}

Embedding RemoteEmbeddingProvider::embed(const FunctionRecord& record) const {
  return embed_remote(record, endpoint_, timeout_);
}

}  // namespace hydra
