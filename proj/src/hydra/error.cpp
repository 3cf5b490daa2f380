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

#include "hydra/error.hpp"

namespace hydra {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kSingleCluster: return "SingleCluster";
    case ErrorCode::kEmptyCluster: return "EmptyCluster";
    case ErrorCode::kUnlabeledModel: return "UnlabeledModel";
    case ErrorCode::kBridgeUnreachable: return "BridgeUnreachable";
    case ErrorCode::kBridgeBadResponse: return "BridgeBadResponse";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kVariantProviderMissing: return "VariantProviderMissing";
    case ErrorCode::kRuleSetMismatch: return "RuleSetMismatch";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace hydra
