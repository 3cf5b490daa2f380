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

#ifndef HYDRA_MODEL_IO_HPP_
#define HYDRA_MODEL_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "hydra/pipeline.hpp"

namespace hydra {

inline constexpr int kModelFormatVersion = 1;

// Line-oriented text artifact. Reals are written as C hexfloats so a saved
// model reloads bit-for-bit. Layout is described in the README.
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::string_view text);  // throws kBadFormat

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace hydra

#endif  // HYDRA_MODEL_IO_HPP_
