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

#include "hydra/model_io.hpp"

#include <charconv>
#include <sstream>

#include "hydra/config.hpp"
#include "hydra/corpus.hpp"
#include "hydra/error.hpp"

namespace hydra {

namespace {

constexpr std::string_view kMagic = "HYDRA-MODEL";

std::string hex(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "cannot format weight");
  return std::string(buf, ptr);
}

class Writer {
 public:
  void line(std::string_view key, const std::string& value) {
    out_ << key << ' ' << value << '\n';
  }
  void reals(std::string_view key, const double* data, std::size_t n) {
    out_ << key << ' ' << n;
    for (std::size_t i = 0; i < n; ++i) out_ << ' ' << hex(data[i]);
    out_ << '\n';
  }
  void dense(const Dense& d) {
    out_ << "layer " << d.w.rows() << ' ' << d.w.cols() << '\n';
    for (Eigen::Index r = 0; r < d.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < d.w.cols(); ++c) out_ << (c ? " " : "") << hex(d.w(r, c));
      out_ << '\n';
    }
    reals("bias", d.b.data(), static_cast<std::size_t>(d.b.size()));
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::string_view token() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\n')) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\n') ++pos_;
    if (start == pos_) bad("unexpected end of model file");
    return text_.substr(start, pos_ - start);
  }
  // Rest of the current line after the key, verbatim (may be empty).
  std::string rest_of_line() {
    if (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
    const std::size_t nl = text_.find('\n', pos_);
    const std::size_t end = nl == std::string_view::npos ? text_.size() : nl;
    std::string s(text_.substr(pos_, end - pos_));
    pos_ = end;
    return s;
  }
  void expect(std::string_view key) {
    const std::string_view t = token();
    if (t != key) bad("expected '" + std::string(key) + "', found '" + std::string(t) + "'");
  }
  std::string keyed_line(std::string_view key) {
    expect(key);
    return rest_of_line();
  }
  template <typename T>
  T integer() {
    const std::string_view t = token();
    T v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) bad("bad integer '" + std::string(t) + "'");
    return v;
  }
  template <typename T>
  T keyed_integer(std::string_view key) {
    expect(key);
    return integer<T>();
  }
  double real() {
    const std::string_view t = token();
    double v = 0.0;
    const bool neg = !t.empty() && t.front() == '-';
    const std::string_view body = neg ? t.substr(1) : t;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v, std::chars_format::hex);
    if (ec != std::errc() || ptr != body.data() + body.size()) bad("bad real '" + std::string(t) + "'");
    return neg ? -v : v;
  }
  double keyed_real(std::string_view key) {
    expect(key);
    return real();
  }
  std::vector<double> reals(std::string_view key) {
    expect(key);
    const auto n = integer<std::size_t>();
    std::vector<double> v(n);
    for (double& x : v) x = real();
    return v;
  }
  Dense dense() {
    expect("layer");
    const auto rows = integer<Eigen::Index>();
    const auto cols = integer<Eigen::Index>();
    Dense d{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) d.w(r, c) = real();
    }
    const std::vector<double> b = reals("bias");
    if (static_cast<Eigen::Index>(b.size()) != rows) bad("bias length does not match layer");
    for (Eigen::Index r = 0; r < rows; ++r) d.b(r) = b[static_cast<std::size_t>(r)];
    return d;
  }

  [[noreturn]] static void bad(const std::string& what) {
    fail(ErrorCode::kBadFormat, "model file: " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

void check_shape(const Dense& d, Eigen::Index rows, Eigen::Index cols) {
  if (d.w.rows() != rows || d.w.cols() != cols) {
    Reader::bad("layer is " + std::to_string(d.w.rows()) + "x" + std::to_string(d.w.cols()) +
                ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

std::string serialize_model(const TrainedModel& m) {
  Writer w;
  w.line(kMagic, std::to_string(kModelFormatVersion));
  w.line("variant", std::string(variant_name(m.variant)));
  w.line("provider", m.provider_id);
  w.line("seed", std::to_string(m.seed));
  w.line("config_hash", m.config_hash);
  w.line("train_corpus", m.train_corpus);
  w.line("representation_dim", std::to_string(m.representation_dim));
  w.line("rules", std::to_string(m.rule_names.size()));
  for (const auto& name : m.rule_names) w.line("rule", name);

  w.line("vae", m.vae ? "1" : "0");
  if (m.vae) {
    const VaeModel& v = *m.vae;
    const VaeConfig& c = v.config;
    w.line("input_dim", std::to_string(v.input_dim));
    w.line("latent_dim", std::to_string(c.latent_dim));
    std::string dims = std::to_string(c.hidden_dims.size());
    for (std::size_t h : c.hidden_dims) dims += " " + std::to_string(h);
    w.line("hidden_dims", dims);
    w.line("epochs", std::to_string(c.epochs));
    w.line("batch_size", std::to_string(c.batch_size));
    w.line("learning_rate", hex(c.learning_rate));
    w.line("momentum", hex(c.momentum));
    w.line("kl_weight", hex(c.kl_weight));
    w.line("vae_seed", std::to_string(c.seed));
    w.line("validation_fraction", hex(c.validation_fraction));
    w.line("best_epoch", std::to_string(v.best_epoch));
    for (const Dense* d : v.layers()) w.dense(*d);
  }

  const ClusterModel& cm = m.clusters;
  const std::size_t dim = cm.centroids.empty() ? 0 : cm.centroids.front().size();
  w.line("clusters", std::to_string(cm.k) + " " + std::to_string(dim));
  w.line("kmeans_seed", std::to_string(cm.seed));
  w.line("inertia", hex(cm.inertia));
  w.line("iterations", std::to_string(cm.iterations));
  w.line("match_threshold", hex(cm.match_threshold));
  for (const Point& c : cm.centroids) w.reals("centroid", c.data(), c.size());
  for (std::size_t c = 0; c < cm.k; ++c) {
    const ClusterAlignment& a = cm.alignment[c];
    std::string row = std::to_string(cm.labels[c]) + " " + std::to_string(a.heuristic) + " " +
                      std::to_string(a.count) + " " + std::to_string(a.size) + " " +
                      std::to_string(a.matched) + " " + hex(a.fraction) + " " +
                      std::to_string(a.rule_counts.size());
    for (std::size_t rc : a.rule_counts) row += " " + std::to_string(rc);
    w.line("cluster_label", row);
  }
  w.line("end", "");
  return w.str();
}

TrainedModel deserialize_model(std::string_view text) {
  Reader r(text);
  r.expect(kMagic);
  const int version = r.integer<int>();
  if (version != kModelFormatVersion) {
    Reader::bad("unsupported format version " + std::to_string(version));
  }
  TrainedModel m;
  m.variant = parse_variant(r.keyed_line("variant"));
  m.provider_id = r.keyed_line("provider");
  m.seed = r.keyed_integer<std::uint64_t>("seed");
  m.config_hash = r.keyed_line("config_hash");
  m.train_corpus = r.keyed_line("train_corpus");
  m.representation_dim = r.keyed_integer<std::size_t>("representation_dim");
  const auto n_rules = r.keyed_integer<std::size_t>("rules");
  for (std::size_t i = 0; i < n_rules; ++i) m.rule_names.push_back(r.keyed_line("rule"));

  if (r.keyed_integer<int>("vae") == 1) {
    VaeConfig c;
    const auto input_dim = r.keyed_integer<std::size_t>("input_dim");
    c.latent_dim = r.keyed_integer<std::size_t>("latent_dim");
    const auto n_hidden = r.keyed_integer<std::size_t>("hidden_dims");
    c.hidden_dims.clear();
    for (std::size_t i = 0; i < n_hidden; ++i) c.hidden_dims.push_back(r.integer<std::size_t>());
    c.epochs = r.keyed_integer<std::size_t>("epochs");
    c.batch_size = r.keyed_integer<std::size_t>("batch_size");
    c.learning_rate = r.keyed_real("learning_rate");
    c.momentum = r.keyed_real("momentum");
    c.kl_weight = r.keyed_real("kl_weight");
    c.seed = r.keyed_integer<std::uint64_t>("vae_seed");
    c.validation_fraction = r.keyed_real("validation_fraction");
    VaeModel v = VaeModel::zeros(input_dim, c);
    v.best_epoch = r.keyed_integer<std::size_t>("best_epoch");
    for (Dense* d : v.layers()) {
      const auto rows = d->w.rows();
      const auto cols = d->w.cols();
      *d = r.dense();
      check_shape(*d, rows, cols);
    }
    if (!v.finite()) Reader::bad("non-finite VAE weight");
    m.vae = std::move(v);
  }

  ClusterModel& cm = m.clusters;
  r.expect("clusters");
  cm.k = r.integer<std::size_t>();
  const auto dim = r.integer<std::size_t>();
  cm.seed = r.keyed_integer<std::uint64_t>("kmeans_seed");
  cm.inertia = r.keyed_real("inertia");
  cm.iterations = r.keyed_integer<std::size_t>("iterations");
  cm.match_threshold = r.keyed_real("match_threshold");
  for (std::size_t c = 0; c < cm.k; ++c) {
    cm.centroids.push_back(r.reals("centroid"));
    if (cm.centroids.back().size() != dim) Reader::bad("centroid width does not match header");
  }
  for (std::size_t c = 0; c < cm.k; ++c) {
    r.expect("cluster_label");
    ClusterAlignment a;
    cm.labels.push_back(r.integer<int>());
    a.heuristic = r.integer<int>();
    a.count = r.integer<std::size_t>();
    a.size = r.integer<std::size_t>();
    a.matched = r.integer<std::size_t>();
    a.fraction = r.real();
    const auto n = r.integer<std::size_t>();
    for (std::size_t i = 0; i < n; ++i) a.rule_counts.push_back(r.integer<std::size_t>());
    cm.alignment.push_back(std::move(a));
  }
  r.expect("end");
  if (m.vae && m.vae->latent_dim() != m.representation_dim) {
    Reader::bad("representation_dim does not match the VAE latent width");
  }
  if (dim != m.representation_dim) Reader::bad("centroid width does not match representation_dim");
  return m;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_text_file(path));
}

}  // namespace hydra
