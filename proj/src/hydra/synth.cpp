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

#include "hydra/synth.hpp"

#include <array>
#include <cstdio>
#include <map>

#include "hydra/csv.hpp"
#include "hydra/heuristics.hpp"
#include "hydra/rng.hpp"

namespace hydra {

namespace {

struct Template {
  int injected;
  std::string_view text;
};

// Placeholders: {fn} {fn2} {ty} {f1} {f2} {p} {q} {s} {v} {w} {i} {g} {acc}
// {n} {N}. Each family avoids the patterns of the other rules.
constexpr std::array<Template, 17> kTemplates = {{
    {1, R"(static int {fn}_total(const struct {ty} *{p})
{
	int {v} = {p}->{f1} + {p}->{f2};
	return {v} * {n};
})"},
    {1, R"(static unsigned int {fn}_window(struct sock *{s})
{
	struct {ty} *{q} = {acc}({s});
	return {q}->{f1} + {n};
})"},
    {1, R"(int {fn}_read(int *{p}, int {v})
{
	int {w} = *{p};
	return {w} + {v};
})"},
    {2, R"(void {fn}_update(struct {ty} *{p}, int {v})
{
	if ({p} == NULL)
		return;
	{p}->{f1} = {v};
	{p}->{f2}++;
})"},
    {2, R"(void {fn}_bump(int {v})
{
	{g}.{f1} += {v};
	{g}.{f2} = {n};
})"},
    {2, R"(void {fn}_rename(struct {ty} *{p}, const char *{s})
{
	if (!{p} || !{s})
		return;
	strncpy({p}->{f1}, {s}, {n});
})"},
    {3, R"(int {fn}_lookup(int {i})
{
	return {g}[{i}] + {n};
})"},
    {3, R"(void {fn}_store(int {i}, int {v})
{
	int {w}[{N}];
	{w}[{i}] = {v};
	{fn2}({w});
})"},
    {3, R"(static int {fn}_fd(int {i})
{
	int {v} = {g}[{i}].{f1};
	return {fn2}({v}, {n});
})"},
    {4, R"(char *{fn}_dup(const char *{s}, size_t {v})
{
	char *{q} = malloc({v} + 1);
	memcpy({q}, {s}, {v});
	return {q};
})"},
    {4, R"(struct {ty} *{fn}_new(int {v})
{
	struct {ty} *{q} = calloc(1, sizeof(*{q}));
	{q}->{f1} = {v};
	return {q};
})"},
    {4, R"(void {fn}_fill(size_t {v}, int {w})
{
	int *{q} = (int *)malloc({v} * sizeof(int));
	{q}[0] = {w};
	{fn2}({q});
})"},
    {5, R"(int {fn}_open(const char *{s})
{
	FILE *{q} = fopen({s}, "r");
	if (!{q}) {
		fprintf(stderr, "cannot open %s\n", {s});
	}
	return {fn2}({q});
})"},
    {5, R"(int {fn}_send(int {i}, int {v})
{
	int {w} = write({i}, &{v}, sizeof({v}));
	if ({w} < 0)
		perror("{fn}");
	return {v};
})"},
    {5, R"(static void {fn}_probe(int {v})
{
	if ({v} > {n})
		pr_err("{fn}: value %d too large\n", {v});
	{fn2}({v});
})"},
    {0, R"(static int {fn}_sum(int {v}, int {w})
{
	int {i} = {v} * {n} + {w};
	return {i};
})"},
    {0, R"(static int {fn}_clamp(int {v}, int {w}, int {i})
{
	if ({v} < {w})
		return {w};
	if ({v} > {i})
		return {i};
	return {v};
})"},
}};

// A third benign shape, kept apart so every family has at least two.
constexpr std::string_view kBenignLength = R"(size_t {fn}_len(const char *{s})
{
	if ({s} == NULL)
		return 0;
	return strlen({s});
})";

constexpr std::array<std::string_view, 12> kPrefixes = {
    "net", "dev", "buf", "cfg", "sess", "pkt", "usb", "blk", "ring", "node", "proc", "file"};
constexpr std::array<std::string_view, 8> kTypes = {
    "device", "session", "packet", "buffer", "context", "request", "queue", "entry"};
constexpr std::array<std::string_view, 10> kFields = {
    "len", "count", "flags", "state", "size", "owner", "refcnt", "mode", "index", "timeout"};
constexpr std::array<std::string_view, 6> kPointers = {"dev", "ctx", "req", "sess", "ent", "obj"};
constexpr std::array<std::string_view, 5> kLocals = {"priv", "info", "slot_ptr", "cur", "tmp"};
constexpr std::array<std::string_view, 4> kStrings = {"name", "path", "src", "label"};
constexpr std::array<std::string_view, 5> kValues = {"val", "amount", "delta", "width", "nbytes"};
constexpr std::array<std::string_view, 4> kSeconds = {"res", "acc", "out", "tally"};
constexpr std::array<std::string_view, 5> kIndices = {"idx", "pos", "slot", "off", "nr"};
constexpr std::array<std::string_view, 5> kGlobals = {"g_table", "slots", "pool_info", "ring_map",
                                                      "cache_tbl"};
constexpr std::array<std::string_view, 4> kAccessors = {"tcp_sk", "inet_csk_ca", "sock_get_priv",
                                                        "lookup_entry"};
constexpr std::array<std::string_view, 5> kSinks = {"consume", "submit", "flush_out", "emit",
                                                    "publish"};

template <std::size_t N>
std::string pick(Rng& rng, const std::array<std::string_view, N>& pool) {
  return std::string(pool[rng.below(N)]);
}

std::string instantiate(std::string_view text, Rng& rng) {
  std::map<std::string, std::string> vars;
  vars["fn"] = pick(rng, kPrefixes);
  vars["fn2"] = pick(rng, kSinks);
  vars["ty"] = pick(rng, kTypes);
  vars["f1"] = pick(rng, kFields);
  do {
    vars["f2"] = pick(rng, kFields);
  } while (vars["f2"] == vars["f1"]);
  vars["p"] = pick(rng, kPointers);
  vars["q"] = pick(rng, kLocals);
  vars["s"] = pick(rng, kStrings);
  vars["v"] = pick(rng, kValues);
  vars["w"] = pick(rng, kSeconds);
  vars["i"] = pick(rng, kIndices);
  vars["g"] = pick(rng, kGlobals);
  vars["acc"] = pick(rng, kAccessors);
  vars["n"] = std::to_string(2 + rng.below(250));
  vars["N"] = std::to_string(8 << rng.below(4));

  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '{') {
      const auto close = text.find('}', i);
      const auto it = close == std::string_view::npos
                          ? vars.end()
                          : vars.find(std::string(text.substr(i + 1, close - i - 1)));
      if (it != vars.end()) {
        out += it->second;
        i = close + 1;
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

}  // namespace

std::vector<SynthFunction> synth_functions(std::size_t count, std::uint64_t seed,
                                           std::string_view split) {
  Rng rng(seed);
  // Families in rotation: H1..H5 then benign.
  std::vector<int> family(count);
  for (std::size_t i = 0; i < count; ++i) family[i] = static_cast<int>((i + 1) % 6);
  rng.shuffle(family);

  std::vector<SynthFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::string_view> choices;
    for (const Template& t : kTemplates) {
      if (t.injected == family[i]) choices.push_back(t.text);
    }
    if (family[i] == 0) choices.push_back(kBenignLength);
    const std::string_view text = choices[rng.below(choices.size())];
    char id[32];
    std::snprintf(id, sizeof id, "-%04zu", i);
    out.push_back(SynthFunction{std::string(split) + id, "synthetic", family[i], instantiate(text, rng)});
  }
  return out;
}

Corpus synth_corpus(const std::vector<SynthFunction>& functions, std::string name) {
  Corpus c;
  c.name = std::move(name);
  for (const SynthFunction& f : functions) {
    c.records.push_back(make_record(f.id, f.project, std::nullopt, f.source));
  }
  return c;
}

void write_synth_csv(const std::vector<SynthFunction>& functions, const std::filesystem::path& path) {
  std::string out = csv::join_row({"id", "project", "injected", "func_after"}) + "\n";
  for (const SynthFunction& f : functions) {
    out += csv::join_row({f.id, f.project, heuristic_label(f.injected), f.source}) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace hydra
