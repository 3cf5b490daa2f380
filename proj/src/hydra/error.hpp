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

#ifndef HYDRA_ERROR_HPP_
#define HYDRA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydra {

// Every failure raised by the core library carries one of these codes. The
// C API maps them one-to-one onto hydra_status values.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kMissingColumn,
  kEmptyCorpus,
  kDimensionMismatch,
  kTooFewSamples,
  kNonFiniteLoss,
  kTooFewPoints,
  kSingleCluster,
  kEmptyCluster,
  kUnlabeledModel,
  kBridgeUnreachable,
  kBridgeBadResponse,
  kTimeout,
  kVariantProviderMissing,
  kRuleSetMismatch,
  kBadFormat,
  kConfig,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hydra

#endif  // HYDRA_ERROR_HPP_
