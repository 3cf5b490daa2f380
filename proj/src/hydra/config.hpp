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

#ifndef HYDRA_CONFIG_HPP_
#define HYDRA_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/latent.hpp"

namespace hydra {

// Every tunable of a run. Serialized as flat `key = value` lines; `#` starts
// a comment. Keys are listed by config_keys().
struct HydraConfig {
  std::uint64_t seed = 42;
  std::string variant = "hydra";  // m1 | m2 | m3 | hydra
  std::size_t k = 2;
  std::string provider = "hashed";  // hashed | remote
  std::string endpoint;
  std::size_t jobs = 1;

  VaeConfig vae;

  std::size_t cluster_max_iter = 300;
  double cluster_tol = 1e-6;
  double match_threshold = 0.5;

  std::size_t max_tokens = 8192;
  std::string column = "func_after";
  std::string id_column;
  std::string rules_file;

  int timeout_ms = 30000;
  std::size_t max_in_flight = 4;
};

const std::vector<std::string>& config_keys();

// Throws kConfig on unknown keys or unparsable values.
void set_config_value(HydraConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const HydraConfig& cfg, std::string_view key);

HydraConfig parse_config(std::string_view text, HydraConfig base = {});
HydraConfig load_config(const std::filesystem::path& path, HydraConfig base = {});

// Canonical text: every key in config_keys() order.
std::string serialize_config(const HydraConfig& cfg);

// 16 hex digits over serialize_config, minus keys that cannot change
// results (jobs, endpoint timeouts).
std::string config_hash(const HydraConfig& cfg);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace hydra

#endif  // HYDRA_CONFIG_HPP_
