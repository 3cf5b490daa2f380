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

#include "hydra/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>

#include "hydra/corpus.hpp"
#include "hydra/embed.hpp"
#include "hydra/error.hpp"

namespace hydra {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expect) {
  fail(ErrorCode::kConfig, "config key '" + std::string(key) + "': expected " + expect + ", got '" +
                               std::string(value) + "'");
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    bad_value(key, value, "an integer");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    bad_value(key, value, "a number");
  }
  return out;
}

std::vector<std::size_t> parse_dims(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    out.push_back(parse_integer<std::size_t>(key, trim(value.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::string join_dims(const std::vector<std::size_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s;
}

struct Field {
  std::function<void(HydraConfig&, std::string_view)> set;
  std::function<std::string(const HydraConfig&)> get;
};

template <typename T>
Field integer_field(std::string key, T HydraConfig::*member) {
  return {[key, member](HydraConfig& c, std::string_view v) { c.*member = parse_integer<T>(key, v); },
          [member](const HydraConfig& c) { return std::to_string(c.*member); }};
}

template <typename T>
Field vae_integer_field(std::string key, T VaeConfig::*member) {
  return {[key, member](HydraConfig& c, std::string_view v) { c.vae.*member = parse_integer<T>(key, v); },
          [member](const HydraConfig& c) { return std::to_string(c.vae.*member); }};
}

Field vae_real_field(std::string key, double VaeConfig::*member) {
  return {[key, member](HydraConfig& c, std::string_view v) { c.vae.*member = parse_real(key, v); },
          [member](const HydraConfig& c) { return format_double(c.vae.*member); }};
}

Field string_field(std::string HydraConfig::*member) {
  return {[member](HydraConfig& c, std::string_view v) { c.*member = std::string(v); },
          [member](const HydraConfig& c) { return c.*member; }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const auto* table = new std::map<std::string, Field, std::less<>>{
      {"seed", integer_field("seed", &HydraConfig::seed)},
      {"variant",
       {[](HydraConfig& c, std::string_view v) {
          if (v != "m1" && v != "m2" && v != "m3" && v != "hydra")
            bad_value("variant", v, "one of m1, m2, m3, hydra");
          c.variant = std::string(v);
        },
        [](const HydraConfig& c) { return c.variant; }}},
      {"k", integer_field("k", &HydraConfig::k)},
      {"provider",
       {[](HydraConfig& c, std::string_view v) {
          if (v != "hashed" && v != "remote") bad_value("provider", v, "hashed or remote");
          c.provider = std::string(v);
        },
        [](const HydraConfig& c) { return c.provider; }}},
      {"endpoint", string_field(&HydraConfig::endpoint)},
      {"jobs", integer_field("jobs", &HydraConfig::jobs)},
      {"vae.latent_dim", vae_integer_field("vae.latent_dim", &VaeConfig::latent_dim)},
      {"vae.hidden_dims",
       {[](HydraConfig& c, std::string_view v) { c.vae.hidden_dims = parse_dims("vae.hidden_dims", v); },
        [](const HydraConfig& c) { return join_dims(c.vae.hidden_dims); }}},
      {"vae.epochs", vae_integer_field("vae.epochs", &VaeConfig::epochs)},
      {"vae.batch_size", vae_integer_field("vae.batch_size", &VaeConfig::batch_size)},
      {"vae.learning_rate", vae_real_field("vae.learning_rate", &VaeConfig::learning_rate)},
      {"vae.momentum", vae_real_field("vae.momentum", &VaeConfig::momentum)},
      {"vae.kl_weight", vae_real_field("vae.kl_weight", &VaeConfig::kl_weight)},
      {"vae.validation_fraction",
       vae_real_field("vae.validation_fraction", &VaeConfig::validation_fraction)},
      {"cluster.max_iter", integer_field("cluster.max_iter", &HydraConfig::cluster_max_iter)},
      {"cluster.tol",
       {[](HydraConfig& c, std::string_view v) { c.cluster_tol = parse_real("cluster.tol", v); },
        [](const HydraConfig& c) { return format_double(c.cluster_tol); }}},
      {"cluster.match_threshold",
       {[](HydraConfig& c, std::string_view v) {
          c.match_threshold = parse_real("cluster.match_threshold", v);
        },
        [](const HydraConfig& c) { return format_double(c.match_threshold); }}},
      {"corpus.max_tokens", integer_field("corpus.max_tokens", &HydraConfig::max_tokens)},
      {"corpus.column", string_field(&HydraConfig::column)},
      {"corpus.id_column", string_field(&HydraConfig::id_column)},
      {"rules.file", string_field(&HydraConfig::rules_file)},
      {"remote.timeout_ms", integer_field("remote.timeout_ms", &HydraConfig::timeout_ms)},
      {"remote.max_in_flight", integer_field("remote.max_in_flight", &HydraConfig::max_in_flight)},
  };
  return *table;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "cannot format number");
  return std::string(buf, ptr);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "seed",           "variant",
      "k",              "provider",
      "endpoint",       "jobs",
      "vae.latent_dim", "vae.hidden_dims",
      "vae.epochs",     "vae.batch_size",
      "vae.learning_rate", "vae.momentum",
      "vae.kl_weight",  "vae.validation_fraction",
      "cluster.max_iter", "cluster.tol",
      "cluster.match_threshold", "corpus.max_tokens",
      "corpus.column",  "corpus.id_column",
      "rules.file",     "remote.timeout_ms",
      "remote.max_in_flight"};
  return keys;
}

void set_config_value(HydraConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = fields().find(key);
  if (it == fields().end()) fail(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
  it->second.set(cfg, trim(value));
}

std::string get_config_value(const HydraConfig& cfg, std::string_view key) {
  const auto it = fields().find(key);
  if (it == fields().end()) fail(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
  return it->second.get(cfg);
}

HydraConfig parse_config(std::string_view text, HydraConfig base) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kConfig, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

HydraConfig load_config(const std::filesystem::path& path, HydraConfig base) {
  return parse_config(read_text_file(path), std::move(base));
}

std::string serialize_config(const HydraConfig& cfg) {
  std::string out;
  for (const std::string& key : config_keys()) out += key + " = " + get_config_value(cfg, key) + "\n";
  return out;
}

std::string config_hash(const HydraConfig& cfg) {
  std::string text;
  for (const std::string& key : config_keys()) {
    if (key == "jobs" || key == "remote.timeout_ms" || key == "remote.max_in_flight") continue;
    text += key + "=" + get_config_value(cfg, key) + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(stable_hash(text, 0x68796472612d6366ULL)));
  return buf;
}

}  // namespace hydra
