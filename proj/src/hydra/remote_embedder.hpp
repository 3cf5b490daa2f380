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

#ifndef HYDRA_REMOTE_EMBEDDER_HPP_
#define HYDRA_REMOTE_EMBEDDER_HPP_

#include <chrono>
#include <cstddef>
#include <string>

#include "hydra/embed.hpp"

namespace hydra {

struct RemoteEndpoint {
  std::string scheme = "http";
  std::string host;
  int port = 80;
  std::string base_path;  // prefix before /embed, without trailing slash
};

// Accepts http://host[:port][/prefix].
RemoteEndpoint parse_endpoint(const std::string& url);

// POST {base}/embed with {"id","code"}; expects {"id","model","vector"[768]}.
// The vector is returned unchanged. Errors: kBridgeUnreachable,
// kBridgeBadResponse (non-2xx, wrong length, non-finite, id mismatch),
// kTimeout.
Embedding embed_remote(const FunctionRecord& record, const std::string& endpoint,
                       std::chrono::milliseconds timeout);

class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  RemoteEmbeddingProvider(std::string endpoint, std::chrono::milliseconds timeout,
                          std::size_t max_in_flight = 4);

  Embedding embed(const FunctionRecord& record) const override;
  // "remote:<endpoint>"; the model name reported by the bridge is carried on
  // each Embedding.
  std::string id() const override { return "remote:" + endpoint_; }
  bool is_remote() const override { return true; }
  std::size_t concurrency() const override { return max_in_flight_; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
  std::size_t max_in_flight_;
};

}  // namespace hydra

#endif  // HYDRA_REMOTE_EMBEDDER_HPP_
