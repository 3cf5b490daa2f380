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

#ifndef HYDRA_CORPUS_HPP_
#define HYDRA_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hydra {

// One patched function.
struct FunctionRecord {
  std::string id;
  std::string project;
  std::optional<std::string> file_path;
  std::string raw_source;
  std::string normalized_source;
  std::size_t token_count = 0;

  bool operator==(const FunctionRecord&) const = default;
};

enum class SourceKind { kCsvDataset, kSourceTree };

// Immutable after loading. Records are in input order for CSV datasets and in
// (relative path, byte offset) order for source trees.
struct Corpus {
  std::string name;
  std::vector<FunctionRecord> records;
  SourceKind source_kind = SourceKind::kCsvDataset;
  std::size_t skipped_count = 0;
};

struct CsvLoadOptions {
  std::string column = "func_after";
  std::optional<std::string> id_column;
  std::optional<std::size_t> limit;
  // Defaults to the file stem when empty.
  std::string name;
};

// Loads the code column of a BigVul-style CSV. A `project` column and a
// `file_path` column are honoured when present.
Corpus load_csv_corpus(const std::filesystem::path& path, const CsvLoadOptions& options = {});

// Same as load_csv_corpus over an in-memory document.
Corpus parse_csv_corpus(std::string_view text, const CsvLoadOptions& options);

// Extracts top-level function definitions from every file under `root`
// whose extension is in `extensions`.
Corpus scan_source_tree(const std::filesystem::path& root,
                        const std::vector<std::string>& extensions = {".c", ".h"});

struct FunctionSpan {
  std::size_t begin = 0;  // byte offset of the first header character
  std::size_t end = 0;    // one past the closing brace
  int start_line = 1;
};

// Brace-balancing function finder used by scan_source_tree.
std::vector<FunctionSpan> find_functions(std::string_view text);

// Removes comments (literals are kept verbatim), converts CR/CRLF to LF,
// collapses horizontal whitespace runs, strips trailing whitespace and drops
// blank lines. Idempotent.
std::string normalize(std::string_view raw_source);

FunctionRecord make_record(std::string id, std::string project,
                           std::optional<std::string> file_path, std::string raw_source);

// Columns: id, project, file_path, raw_source. Reload with
// column="raw_source", id_column="id".
void write_csv_corpus(const Corpus& corpus, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hydra

#endif  // HYDRA_CORPUS_HPP_
