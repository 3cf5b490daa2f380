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

#include "hydra/latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hydra/error.hpp"
#include "hydra/rng.hpp"

namespace hydra {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Dense xavier(std::size_t in, std::size_t out, Rng& rng) {
  Dense d{MatrixXd(out, in), VectorXd::Zero(static_cast<Eigen::Index>(out))};
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  for (Eigen::Index c = 0; c < d.w.cols(); ++c) {
    for (Eigen::Index r = 0; r < d.w.rows(); ++r) d.w(r, c) = rng.uniform(-limit, limit);
  }
  return d;
}

Dense zero_dense(std::size_t in, std::size_t out) {
  return Dense{MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)),
               VectorXd::Zero(static_cast<Eigen::Index>(out))};
}

template <typename Make>
VaeModel build(std::size_t input_dim, const VaeConfig& cfg, Make make) {
  validate(cfg);
  if (input_dim == 0) fail(ErrorCode::kInvalidArgument, "VAE input width must be positive");
  VaeModel m;
  m.input_dim = input_dim;
  m.config = cfg;
  std::size_t prev = input_dim;
  for (std::size_t h : cfg.hidden_dims) {
    m.encoder.push_back(make(prev, h));
    prev = h;
  }
  m.mu_head = make(prev, cfg.latent_dim);
  m.logvar_head = make(prev, cfg.latent_dim);
  prev = cfg.latent_dim;
  for (auto it = cfg.hidden_dims.rbegin(); it != cfg.hidden_dims.rend(); ++it) {
    m.decoder.push_back(make(prev, *it));
    prev = *it;
  }
  m.decoder.push_back(make(prev, input_dim));
  return m;
}

MatrixXd affine(const Dense& d, const MatrixXd& x) {
  return (d.w * x).colwise() + d.b;
}

struct Forward {
  std::vector<MatrixXd> enc_act;  // enc_act[0] = input, then each tanh output
  MatrixXd mu;
  MatrixXd logvar_raw;
  MatrixXd logvar;
  MatrixXd z;
  std::vector<MatrixXd> dec_act;  // dec_act[0] = z, then each tanh output
  MatrixXd output;
};

Forward forward(const VaeModel& m, const MatrixXd& x, const MatrixXd& noise) {
  if (static_cast<std::size_t>(x.rows()) != m.input_dim) {
    fail(ErrorCode::kDimensionMismatch, "batch width " + std::to_string(x.rows()) +
                                            " does not match model input " +
                                            std::to_string(m.input_dim));
  }
  if (x.cols() == 0) fail(ErrorCode::kInvalidArgument, "empty batch");
  if (noise.rows() != m.mu_head.w.rows() || noise.cols() != x.cols()) {
    fail(ErrorCode::kDimensionMismatch, "noise matrix must be latent_dim x batch");
  }
  Forward f;
  f.enc_act.push_back(x);
  for (const Dense& d : m.encoder) f.enc_act.push_back(affine(d, f.enc_act.back()).array().tanh());
  f.mu = affine(m.mu_head, f.enc_act.back());
  f.logvar_raw = affine(m.logvar_head, f.enc_act.back());
  f.logvar = f.logvar_raw.cwiseMax(kLogVarMin).cwiseMin(kLogVarMax);
  f.z = f.mu.array() + (0.5 * f.logvar.array()).exp() * noise.array();
  f.dec_act.push_back(f.z);
  for (std::size_t i = 0; i + 1 < m.decoder.size(); ++i) {
    f.dec_act.push_back(affine(m.decoder[i], f.dec_act.back()).array().tanh());
  }
  f.output = affine(m.decoder.back(), f.dec_act.back());
  return f;
}

LossBreakdown loss_of(const VaeModel& m, const Forward& f, const MatrixXd& x) {
  const double batch = static_cast<double>(x.cols());
  LossBreakdown l;
  const double sse = (f.output - x).squaredNorm();
  l.reconstruction = sse / batch;
  l.mse = sse / (batch * static_cast<double>(x.rows()));
  l.kl = 0.5 * (f.mu.array().square() + f.logvar.array().exp() - f.logvar.array() - 1.0).sum() /
         batch;
  l.total = l.reconstruction + m.config.kl_weight * l.kl;
  return l;
}

// Gradient of a layer given dL/d(output) and its input; returns dL/d(input).
MatrixXd backprop(const Dense& d, const MatrixXd& input, const MatrixXd& grad_out, Dense& g) {
  g.w = grad_out * input.transpose();
  g.b = grad_out.rowwise().sum();
  return d.w.transpose() * grad_out;
}

}  // namespace

void validate(const VaeConfig& cfg) {
  auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidArgument, "VaeConfig: " + what); };
  if (cfg.latent_dim < 1) bad("latent_dim must be >= 1");
  if (cfg.epochs < 1) bad("epochs must be >= 1");
  if (cfg.batch_size < 1) bad("batch_size must be >= 1");
  for (std::size_t h : cfg.hidden_dims) {
    if (h < 1) bad("hidden_dims entries must be >= 1");
  }
  if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0))
    bad("validation_fraction must lie in (0, 1)");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
    bad("learning_rate must be positive");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) bad("momentum must lie in [0, 1)");
  if (!(cfg.kl_weight >= 0.0) || !std::isfinite(cfg.kl_weight)) bad("kl_weight must be >= 0");
}

FusedVector fuse(const std::vector<double>& embedding, const std::vector<std::uint8_t>& bits) {
  if (embedding.size() != kEmbeddingDim) {
    fail(ErrorCode::kDimensionMismatch,
         "embedding has " + std::to_string(embedding.size()) + " values, expected 768");
  }
  if (bits.empty()) fail(ErrorCode::kDimensionMismatch, "empty heuristic vector");
  FusedVector f;
  f.values.reserve(embedding.size() + bits.size());
  f.values.assign(embedding.begin(), embedding.end());
  for (std::uint8_t b : bits) f.values.push_back(b ? 1.0 : 0.0);
  return f;
}

FusedVector fuse(const Embedding& e, const HeuristicVector& h) { return fuse(e.values, h.bits); }

FusedVector project_for_test(const Embedding& e, std::size_t heuristic_width) {
  return fuse(e.values, std::vector<std::uint8_t>(heuristic_width, 0));
}

VaeModel VaeModel::initialize(std::size_t input_dim, const VaeConfig& cfg) {
  Rng rng(cfg.seed);
  return build(input_dim, cfg, [&](std::size_t in, std::size_t out) { return xavier(in, out, rng); });
}

VaeModel VaeModel::zeros(std::size_t input_dim, const VaeConfig& cfg) {
  return build(input_dim, cfg, zero_dense);
}

std::vector<Dense*> VaeModel::layers() {
  std::vector<Dense*> out;
  for (Dense& d : encoder) out.push_back(&d);
  out.push_back(&mu_head);
  out.push_back(&logvar_head);
  for (Dense& d : decoder) out.push_back(&d);
  return out;
}

std::vector<const Dense*> VaeModel::layers() const {
  std::vector<const Dense*> out;
  for (const Dense& d : encoder) out.push_back(&d);
  out.push_back(&mu_head);
  out.push_back(&logvar_head);
  for (const Dense& d : decoder) out.push_back(&d);
  return out;
}

bool VaeModel::finite() const {
  for (const Dense* d : layers()) {
    if (!d->w.allFinite() || !d->b.allFinite()) return false;
  }
  return true;
}

LossBreakdown elbo_loss(const VaeModel& model, const MatrixXd& batch, const MatrixXd& noise) {
  return loss_of(model, forward(model, batch, noise), batch);
}

LossBreakdown elbo_gradients(const VaeModel& model, const MatrixXd& batch, const MatrixXd& noise,
                             std::vector<Dense>& grads) {
  const Forward f = forward(model, batch, noise);
  const LossBreakdown loss = loss_of(model, f, batch);
  const double inv_b = 1.0 / static_cast<double>(batch.cols());
  const double beta = model.config.kl_weight;

  const std::size_t n_enc = model.encoder.size();
  const std::size_t n_dec = model.decoder.size();
  grads.assign(n_enc + 2 + n_dec, Dense{});

  // Decoder, output layer first.
  MatrixXd g = 2.0 * inv_b * (f.output - batch);
  for (std::size_t i = n_dec; i-- > 0;) {
    if (i + 1 < n_dec) g = g.cwiseProduct((1.0 - f.dec_act[i + 1].array().square()).matrix());
    g = backprop(model.decoder[i], f.dec_act[i], g, grads[n_enc + 2 + i]);
  }
  // g is now dL/dz.
  const MatrixXd sigma_half = 0.5 * (0.5 * f.logvar.array()).exp();
  MatrixXd d_mu = g + beta * inv_b * f.mu;
  MatrixXd d_logvar =
      g.cwiseProduct(noise).cwiseProduct(sigma_half) +
      (beta * inv_b * 0.5 * (f.logvar.array().exp() - 1.0)).matrix();
  for (Eigen::Index c = 0; c < d_logvar.cols(); ++c) {
    for (Eigen::Index r = 0; r < d_logvar.rows(); ++r) {
      const double raw = f.logvar_raw(r, c);
      if (raw < kLogVarMin || raw > kLogVarMax) d_logvar(r, c) = 0.0;
    }
  }
  const MatrixXd& h = f.enc_act.back();
  g = backprop(model.mu_head, h, d_mu, grads[n_enc]);
  g += backprop(model.logvar_head, h, d_logvar, grads[n_enc + 1]);
  for (std::size_t i = n_enc; i-- > 0;) {
    g = g.cwiseProduct((1.0 - f.enc_act[i + 1].array().square()).matrix());
    g = backprop(model.encoder[i], f.enc_act[i], g, grads[i]);
  }
  return loss;
}

MatrixXd to_matrix(const std::vector<FusedVector>& data) {
  if (data.empty()) return MatrixXd();
  const std::size_t width = data.front().values.size();
  MatrixXd m(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(data.size()));
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (data[j].values.size() != width) {
      fail(ErrorCode::kDimensionMismatch, "fused vectors differ in width");
    }
    for (std::size_t i = 0; i < width; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[j].values[i];
    }
  }
  return m;
}

TrainResult train_vae(const std::vector<FusedVector>& data, const VaeConfig& cfg) {
  validate(cfg);
  if (data.size() < 10) {
    fail(ErrorCode::kTooFewSamples,
         "VAE training needs at least 10 vectors, got " + std::to_string(data.size()));
  }
  const MatrixXd all = to_matrix(data);
  if (!all.allFinite()) fail(ErrorCode::kInvalidArgument, "training data contains non-finite values");
  const std::size_t n = data.size();

  TrainResult result{VaeModel::initialize(static_cast<std::size_t>(all.rows()), cfg), {}};
  VaeModel& model = result.model;
  // The initializer consumed its own stream; shuffles and noise use a second one.
  Rng rng(cfg.seed ^ 0x5bd1e995d1b54a32ULL);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t n_val = static_cast<std::size_t>(std::ceil(cfg.validation_fraction * static_cast<double>(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
  MatrixXd val(all.rows(), static_cast<Eigen::Index>(n_val));
  for (std::size_t j = 0; j < n_val; ++j) {
    val.col(static_cast<Eigen::Index>(j)) = all.col(static_cast<Eigen::Index>(order[n - n_val + j]));
  }
  const MatrixXd val_noise = MatrixXd::Zero(static_cast<Eigen::Index>(cfg.latent_dim), val.cols());

  std::vector<Dense> velocity;
  for (const Dense* d : model.layers()) {
    velocity.push_back(Dense{MatrixXd::Zero(d->w.rows(), d->w.cols()), VectorXd::Zero(d->b.size())});
  }
  VaeModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Dense> grads;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(train_idx);
    LossBreakdown epoch_loss;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(train_idx.size(), start + cfg.batch_size);
      const auto b = static_cast<Eigen::Index>(stop - start);
      MatrixXd batch(all.rows(), b);
      for (Eigen::Index j = 0; j < b; ++j) {
        batch.col(j) = all.col(static_cast<Eigen::Index>(train_idx[start + static_cast<std::size_t>(j)]));
      }
      MatrixXd noise(static_cast<Eigen::Index>(cfg.latent_dim), b);
      for (Eigen::Index c = 0; c < b; ++c) {
        for (Eigen::Index r = 0; r < noise.rows(); ++r) noise(r, c) = rng.normal();
      }
      const LossBreakdown l = elbo_gradients(model, batch, noise, grads);
      if (!std::isfinite(l.total)) {
        std::ostringstream msg;
        msg << "training diverged at epoch " << epoch << " (batch starting at " << start
            << "): reconstruction=" << l.reconstruction << " kl=" << l.kl
            << "; try a smaller learning_rate";
        fail(ErrorCode::kNonFiniteLoss, msg.str());
      }
      const double weight = static_cast<double>(b) / static_cast<double>(train_idx.size());
      epoch_loss.reconstruction += weight * l.reconstruction;
      epoch_loss.kl += weight * l.kl;
      epoch_loss.total += weight * l.total;
      epoch_loss.mse += weight * l.mse;

      auto params = model.layers();
      for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i].w = cfg.momentum * velocity[i].w - cfg.learning_rate * grads[i].w;
        velocity[i].b = cfg.momentum * velocity[i].b - cfg.learning_rate * grads[i].b;
        params[i]->w += velocity[i].w;
        params[i]->b += velocity[i].b;
      }
    }
    const LossBreakdown v = elbo_loss(model, val, val_noise);
    if (!std::isfinite(v.total) || !model.finite()) {
      std::ostringstream msg;
      msg << "training diverged at epoch " << epoch << ": validation total=" << v.total
          << " train total=" << epoch_loss.total << "; try a smaller learning_rate";
      fail(ErrorCode::kNonFiniteLoss, msg.str());
    }
    result.trace.push_back(EpochLoss{epoch_loss, v});
    if (v.total < best_val) {
      best_val = v.total;
      best = model;
      best.best_epoch = epoch;
    }
  }
  result.model = std::move(best);
  return result;
}

LatentPoint encode_latent(const VaeModel& model, const FusedVector& v, std::string function_id) {
  if (v.values.size() != model.input_dim) {
    fail(ErrorCode::kDimensionMismatch, "vector width " + std::to_string(v.values.size()) +
                                            " does not match model input " +
                                            std::to_string(model.input_dim));
  }
  VectorXd a = Eigen::Map<const VectorXd>(v.values.data(), static_cast<Eigen::Index>(v.values.size()));
  for (const Dense& d : model.encoder) a = (d.w * a + d.b).array().tanh();
  const VectorXd mu = model.mu_head.w * a + model.mu_head.b;
  return LatentPoint{std::vector<double>(mu.data(), mu.data() + mu.size()), std::move(function_id)};
}

std::vector<LatentPoint> encode_all(const VaeModel& model, const std::vector<FusedVector>& data,
                                    const std::vector<std::string>& ids) {
  std::vector<LatentPoint> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back(encode_latent(model, data[i], i < ids.size() ? ids[i] : std::string()));
  }
  return out;
}

std::vector<double> reconstruct(const VaeModel& model, const FusedVector& v) {
  const LatentPoint p = encode_latent(model, v);
  VectorXd a = Eigen::Map<const VectorXd>(p.values.data(), static_cast<Eigen::Index>(p.values.size()));
  for (std::size_t i = 0; i + 1 < model.decoder.size(); ++i) {
    a = (model.decoder[i].w * a + model.decoder[i].b).array().tanh();
  }
  const VectorXd out = model.decoder.back().w * a + model.decoder.back().b;
  return std::vector<double>(out.data(), out.data() + out.size());
}

}  // namespace hydra
