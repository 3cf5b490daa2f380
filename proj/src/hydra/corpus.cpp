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

#include "hydra/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hydra/c_lexer.hpp"
#include "hydra/csv.hpp"
#include "hydra/embed.hpp"
#include "hydra/error.hpp"

namespace hydra {
namespace {

bool is_horizontal_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

std::string normalize_once(std::string_view in) {
  std::string text;
  text.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == '\r') {
      text.push_back('\n');
      if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
    } else {
      text.push_back(in[i]);
    }
  }

  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  const std::size_t n = text.size();

  auto emit = [&](char c) {
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  };
  auto end_line = [&] {
    pending_space = false;
    while (!out.empty() && is_horizontal_space(out.back())) out.pop_back();
    if (!out.empty() && out.back() != '\n') out.push_back('\n');
  };

  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      end_line();
      ++i;
    } else if (is_horizontal_space(c)) {
      pending_space = true;
      ++i;
    } else if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      i += 2;
      bool broke_line = false;
      while (i < n && !(text[i] == '*' && i + 1 < n && text[i + 1] == '/')) {
        if (text[i] == '\n') {
          end_line();
          broke_line = true;
        }
        ++i;
      }
      i = std::min(n, i + 2);
      if (!broke_line) pending_space = true;
    } else if (c == '"' || c == '\'') {
      emit(c);
      ++i;
      while (i < n) {
        const char d = text[i];
        if (d == '\\' && i + 1 < n) {
          out.push_back(d);
          out.push_back(text[i + 1]);
          i += 2;
          continue;
        }
        if (d == '\n') break;
        out.push_back(d);
        ++i;
        if (d == c) break;
      }
    } else {
      emit(c);
      ++i;
    }
  }
  end_line();
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string file_stem_or(const std::filesystem::path& p, std::string fallback) {
  std::string stem = p.stem().string();
  return stem.empty() ? fallback : stem;
}

bool trimmed_empty(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

std::string normalize(std::string_view raw_source) {
  std::string current = normalize_once(raw_source);
  // A single pass is a fixpoint for well-formed C; malformed literals can
  // need another round.
  for (int round = 0; round < 8; ++round) {
    std::string next = normalize_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

FunctionRecord make_record(std::string id, std::string project,
                           std::optional<std::string> file_path, std::string raw_source) {
  FunctionRecord r;
  r.id = std::move(id);
  r.project = std::move(project);
  r.file_path = std::move(file_path);
  r.raw_source = std::move(raw_source);
  r.normalized_source = normalize(r.raw_source);
  r.token_count = tokenize(r.normalized_source).tokens.size();
  return r;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, "read failed: " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
}

Corpus parse_csv_corpus(std::string_view text, const CsvLoadOptions& options) {
  csv::Reader reader(text);
  std::vector<std::string> header;
  bool malformed = false;
  if (!reader.next(header, malformed)) fail(ErrorCode::kEmptyCorpus, "CSV has no header row");
  // Tolerate a UTF-8 byte order mark on the first header cell.
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto find_column = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };

  const auto code_col = find_column(options.column);
  if (!code_col) fail(ErrorCode::kMissingColumn, "missing column: " + options.column);
  std::optional<std::size_t> id_col;
  if (options.id_column) {
    id_col = find_column(*options.id_column);
    if (!id_col) fail(ErrorCode::kMissingColumn, "missing column: " + *options.id_column);
  }
  const auto project_col = find_column("project");
  const auto path_col = find_column("file_path");

  Corpus corpus;
  corpus.name = options.name.empty() ? "corpus" : options.name;
  corpus.source_kind = SourceKind::kCsvDataset;
  std::set<std::string> seen;
  std::vector<std::string> row;
  std::size_t row_index = 0;
  while (reader.next(row, malformed)) {
    const std::size_t index = row_index++;
    if (options.limit && corpus.records.size() >= *options.limit) break;
    if (malformed || row.size() <= *code_col || (id_col && row.size() <= *id_col) ||
        trimmed_empty(row[*code_col])) {
      ++corpus.skipped_count;
      continue;
    }
    std::string id = id_col ? row[*id_col] : std::to_string(index);
    if (!seen.insert(id).second) fail(ErrorCode::kBadFormat, "duplicate id: " + id);
    std::string project =
        project_col && row.size() > *project_col ? row[*project_col] : corpus.name;
    std::optional<std::string> file_path;
    if (path_col && row.size() > *path_col && !row[*path_col].empty())
      file_path = row[*path_col];
    corpus.records.push_back(
        make_record(std::move(id), std::move(project), std::move(file_path), row[*code_col]));
  }
  if (corpus.records.empty())
    fail(ErrorCode::kEmptyCorpus, "no usable rows in column " + options.column);
  return corpus;
}

Corpus load_csv_corpus(const std::filesystem::path& path, const CsvLoadOptions& options) {
  const std::string text = read_text_file(path);
  CsvLoadOptions opts = options;
  if (opts.name.empty()) opts.name = file_stem_or(path, "corpus");
  return parse_csv_corpus(text, opts);
}

std::vector<FunctionSpan> find_functions(std::string_view text) {
  const std::vector<Lexeme> lx = lex_c(text);
  std::vector<FunctionSpan> found;
  std::vector<bool> transparent;  // namespace / extern "C" scopes
  std::size_t header_start = 0;
  std::size_t i = 0;

  auto is_function_header = [&](std::size_t begin, std::size_t brace) {
    if (brace <= begin) return false;
    // Skip trailing qualifiers such as `const` or `noexcept`.
    std::size_t close = brace;
    while (close > begin && lx[close - 1].kind == LexKind::kIdentifier) --close;
    if (close == begin || lx[close - 1].text != ")") return false;
    // Find the matching '('.
    int depth = 0;
    std::size_t open = close - 1;
    for (std::size_t j = close; j-- > begin;) {
      if (lx[j].text == ")") ++depth;
      if (lx[j].text == "(" && --depth == 0) {
        open = j;
        break;
      }
    }
    if (depth != 0 || open <= begin) return false;
    const Lexeme& name = lx[open - 1];
    if (name.kind != LexKind::kIdentifier) return false;
    static const std::set<std::string> kControl = {"if",     "while", "for",    "switch",
                                                   "return", "sizeof", "else",  "do"};
    if (kControl.contains(name.text)) return false;
    // A return type must precede the (possibly qualified) name.
    std::size_t name_begin = open - 1;
    while (name_begin >= begin + 2 && lx[name_begin - 1].text == "::" &&
           lx[name_begin - 2].kind == LexKind::kIdentifier)
      name_begin -= 2;
    if (name_begin > begin && lx[name_begin - 1].text == "~") --name_begin;
    if (name_begin == begin) return false;
    for (std::size_t j = begin; j < open; ++j) {
      if (lx[j].kind == LexKind::kPunct && (lx[j].text == "=" || lx[j].text == "(" ||
                                            lx[j].text == ")" || lx[j].text == ","))
        return false;
    }
    return true;
  };

  while (i < lx.size()) {
    const Lexeme& t = lx[i];
    // Preprocessor directive: skip the logical line.
    if (t.text == "#" && (i == 0 || lx[i - 1].line != t.line)) {
      int line = t.line;
      std::size_t j = i + 1;
      while (j < lx.size()) {
        if (lx[j].line != line) {
          if (lx[j - 1].text == "\\" && lx[j].line == line + 1) {
            line = lx[j].line;
          } else {
            break;
          }
        }
        ++j;
      }
      i = j;
      header_start = i;
      continue;
    }
    if (t.text == ";") {
      header_start = ++i;
      continue;
    }
    if (t.text == "}") {
      if (!transparent.empty()) transparent.pop_back();
      header_start = ++i;
      continue;
    }
    if (t.text != "{") {
      ++i;
      continue;
    }
    const bool is_namespace = header_start < i && lx[header_start].text == "namespace";
    const bool is_extern_block = i - header_start == 2 && lx[header_start].text == "extern" &&
                                 lx[header_start + 1].kind == LexKind::kString;
    if (is_namespace || is_extern_block) {
      transparent.push_back(true);
      header_start = ++i;
      continue;
    }
    const std::size_t close = match_bracket(lx, i);
    if (close >= lx.size()) break;
    if (is_function_header(header_start, i)) {
      FunctionSpan span;
      span.begin = lx[header_start].offset;
      span.end = lx[close].offset + 1;
      span.start_line = lx[header_start].line;
      found.push_back(span);
      header_start = close + 1;
    }
    i = close + 1;
  }
  return found;
}

Corpus scan_source_tree(const std::filesystem::path& root,
                        const std::vector<std::string>& extensions) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) fail(ErrorCode::kIo, "not a readable directory: " + root.string());

  std::vector<std::string> files;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) fail(ErrorCode::kIo, "cannot read " + root.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file(ec)) continue;
    const std::string ext = entry.path().extension().string();
    if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;
    files.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(files.begin(), files.end());

  Corpus corpus;
  corpus.source_kind = SourceKind::kSourceTree;
  corpus.name = fs::absolute(root).lexically_normal().filename().string();
  if (corpus.name.empty()) corpus.name = fs::absolute(root).lexically_normal().parent_path().filename().string();
  for (const std::string& rel : files) {
    const std::string text = read_text_file(root / rel);
    for (const FunctionSpan& span : find_functions(text)) {
      corpus.records.push_back(make_record(rel + "#" + std::to_string(span.start_line),
                                           corpus.name, rel,
                                           text.substr(span.begin, span.end - span.begin)));
    }
  }
  if (corpus.records.empty())
    fail(ErrorCode::kEmptyCorpus, "no function definitions under " + root.string());
  return corpus;
}

void write_csv_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::string doc = csv::join_row({"id", "project", "file_path", "raw_source"});
  doc += "\n";
  for (const FunctionRecord& r : corpus.records) {
    doc += csv::join_row({r.id, r.project, r.file_path.value_or(""), r.raw_source});
    doc += "\n";
  }
  write_text_file(path, doc);
}

}  // namespace hydra
