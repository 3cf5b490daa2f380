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

#ifndef HYDRA_CSV_HPP_
#define HYDRA_CSV_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hydra::csv {

// RFC 4180 reader over an in-memory document. Quoted fields may contain
// separators, doubled quotes and line breaks; records end at LF or CRLF.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}
  explicit Reader(const char* text) : text_(text) {}
  // The reader keeps a view; a temporary string would dangle.
  explicit Reader(std::string&&) = delete;

  // Reads the next record into `fields`. Returns false at end of input.
  // `malformed` is set when the record contains characters after a closing
  // quote or an unterminated quoted field.
  bool next(std::vector<std::string>& fields, bool& malformed);

  std::size_t record_number() const { return records_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t records_ = 0;
};

std::string escape_field(std::string_view field);

// Joins already-formatted values into one CSV line (no trailing newline).
std::string join_row(const std::vector<std::string>& fields);

}  // namespace hydra::csv

#endif  // HYDRA_CSV_HPP_
