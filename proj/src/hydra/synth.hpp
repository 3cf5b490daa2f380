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

#ifndef HYDRA_SYNTH_HPP_
#define HYDRA_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/corpus.hpp"

namespace hydra {

// A generated C function. `injected` is the rule index its template was
// written to trigger (0 for benign templates).
struct SynthFunction {
  std::string id;
  std::string project;
  int injected = 0;
  std::string source;
};

// `count` functions spread evenly over the five rule families plus benign
// code, in seeded random order. Identifiers and constants are randomized.
// Ids are "<split>-0000", "<split>-0001", ...
std::vector<SynthFunction> synth_functions(std::size_t count, std::uint64_t seed,
                                           std::string_view split);

Corpus synth_corpus(const std::vector<SynthFunction>& functions, std::string name);

// Columns: id, project, injected, func_after. `injected` is "H1".."H5" or
// "None".
void write_synth_csv(const std::vector<SynthFunction>& functions, const std::filesystem::path& path);

}  // namespace hydra

#endif  // HYDRA_SYNTH_HPP_
