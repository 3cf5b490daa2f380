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


#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "hydra/error.hpp"
#include "hydra/latent.hpp"
#include "hydra/rng.hpp"

namespace {

hydra::VaeConfig tiny_config() {
  hydra::VaeConfig cfg;
  cfg.latent_dim = 2;
  cfg.hidden_dims = {4};
  cfg.seed = 11;
  return cfg;
}

Eigen::MatrixXd random_matrix(hydra::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  return m;
}

// Scalar forward pass written out longhand as a reference for elbo_loss.
double reference_elbo(const hydra::VaeModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& eps) {
  auto apply = [](const hydra::Dense& d, const std::vector<double>& in, bool squash) {
    std::vector<double> out(static_cast<std::size_t>(d.w.rows()));
    for (Eigen::Index r = 0; r < d.w.rows(); ++r) {
      double s = d.b(r);
      for (Eigen::Index c = 0; c < d.w.cols(); ++c) s += d.w(r, c) * in[static_cast<std::size_t>(c)];
      out[static_cast<std::size_t>(r)] = squash ? std::tanh(s) : s;
    }
    return out;
  };
  double total = 0;
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    std::vector<double> h(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) h[static_cast<std::size_t>(r)] = x(r, col);
    const std::vector<double> input = h;
    for (const auto& d : m.encoder) h = apply(d, h, true);
    const auto mu = apply(m.mu_head, h, false);
    auto lv = apply(m.logvar_head, h, false);
    std::vector<double> z(mu.size());
    double kl = 0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      lv[j] = std::clamp(lv[j], -10.0, 10.0);
      z[j] = mu[j] + std::exp(0.5 * lv[j]) * eps(static_cast<Eigen::Index>(j), col);
      kl += -0.5 * (1 + lv[j] - mu[j] * mu[j] - std::exp(lv[j]));
    }
    std::vector<double> y = z;
    for (std::size_t i = 0; i < m.decoder.size(); ++i) y = apply(m.decoder[i], y, i + 1 < m.decoder.size());
    double sse = 0;
    for (std::size_t i = 0; i < y.size(); ++i) sse += (y[i] - input[i]) * (y[i] - input[i]);
    total += sse + m.config.kl_weight * kl;
  }
  return total / static_cast<double>(x.cols());
}

}  // namespace

TEST_SUITE("latent") {

TEST_CASE("fusion layout is [embedding | heuristics] with width 773") {
  hydra::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    hydra::Embedding e;
    e.values.resize(hydra::kEmbeddingDim);
    for (double& v : e.values) v = rng.normal();
    hydra::HeuristicVector h;
    h.bits.resize(5);
    for (auto& b : h.bits) b = static_cast<std::uint8_t>(rng.below(2));
    const auto fused = hydra::fuse(e, h);
    REQUIRE(fused.values.size() == 773);
    CHECK(std::equal(e.values.begin(), e.values.end(), fused.values.begin()));
    for (std::size_t i = 0; i < 5; ++i) CHECK(fused.values[768 + i] == static_cast<double>(h.bits[i]));
    const auto test_vec = hydra::project_for_test(e);
    REQUIRE(test_vec.values.size() == 773);
    CHECK(std::equal(e.values.begin(), e.values.end(), test_vec.values.begin()));
    CHECK(std::all_of(test_vec.values.begin() + 768, test_vec.values.end(), [](double v) { return v == 0.0; }));
  }
}

TEST_CASE("fusion rejects bad widths") {
  CHECK_THROWS_AS(hydra::fuse(std::vector<double>(10, 0.0), std::vector<std::uint8_t>(5, 0)), hydra::Error);
  CHECK_THROWS_AS(hydra::fuse(std::vector<double>(768, 0.0), std::vector<std::uint8_t>{}), hydra::Error);
  CHECK(hydra::fuse(std::vector<double>(768, 0.0), std::vector<std::uint8_t>(7, 1)).values.size() == 775);
}

TEST_CASE("config validation") {
  hydra::VaeConfig cfg;
  CHECK_NOTHROW(hydra::validate(cfg));
  cfg.latent_dim = 0;
  CHECK_THROWS_AS(hydra::validate(cfg), hydra::Error);
  cfg = {};
  cfg.learning_rate = -1;
  CHECK_THROWS_AS(hydra::validate(cfg), hydra::Error);
  cfg = {};
  cfg.validation_fraction = 1.0;
  CHECK_THROWS_AS(hydra::validate(cfg), hydra::Error);
}

TEST_CASE("architecture mirrors the encoder") {
  const auto m = hydra::VaeModel::initialize(773, hydra::VaeConfig{});
  REQUIRE(m.encoder.size() == 2);
  CHECK(m.encoder[0].w.rows() == 256);
  CHECK(m.encoder[0].w.cols() == 773);
  CHECK(m.encoder[1].w.rows() == 64);
  CHECK(m.mu_head.w.rows() == 16);
  CHECK(m.logvar_head.w.rows() == 16);
  REQUIRE(m.decoder.size() == 3);
  CHECK(m.decoder[0].w.cols() == 16);
  CHECK(m.decoder[0].w.rows() == 64);
  CHECK(m.decoder[2].w.rows() == 773);
  CHECK(m.layers().size() == 7);
  CHECK(m.finite());
}

TEST_CASE("elbo_loss matches a longhand forward pass") {
  hydra::Rng rng(3);
  auto cfg = tiny_config();
  cfg.kl_weight = 0.7;
  const auto m = hydra::VaeModel::initialize(7, cfg);
  const auto x = random_matrix(rng, 7, 5);
  const auto eps = random_matrix(rng, 2, 5);
  const auto l = hydra::elbo_loss(m, x, eps);
  CHECK(l.total == doctest::Approx(reference_elbo(m, x, eps)).epsilon(1e-12));
  CHECK(l.total == doctest::Approx(l.reconstruction + 0.7 * l.kl).epsilon(1e-12));
  CHECK(l.mse == doctest::Approx(l.reconstruction / 7).epsilon(1e-12));
  CHECK(l.kl >= 0.0);
}

TEST_CASE("analytic gradients agree with central differences") {
  hydra::Rng rng(17);
  const auto cfg = tiny_config();
  auto model = hydra::VaeModel::initialize(7, cfg);
  double worst = 0;
  for (int b = 0; b < 3; ++b) {
    const auto x = random_matrix(rng, 7, 4);
    const auto eps = random_matrix(rng, 2, 4);
    std::vector<hydra::Dense> grads;
    hydra::elbo_gradients(model, x, eps, grads);
    auto params = model.layers();
    REQUIRE(grads.size() == params.size());
    const double h = 1e-6;
    auto check_one = [&](double& p, double analytic) {
      const double saved = p;
      p = saved + h;
      const double up = hydra::elbo_loss(model, x, eps).total;
      p = saved - h;
      const double down = hydra::elbo_loss(model, x, eps).total;
      p = saved;
      const double numeric = (up - down) / (2 * h);
      const double rel = std::fabs(analytic - numeric) / std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
      worst = std::max(worst, rel);
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
      for (Eigen::Index r = 0; r < params[i]->w.rows(); ++r)
        for (Eigen::Index c = 0; c < params[i]->w.cols(); ++c) check_one(params[i]->w(r, c), grads[i].w(r, c));
      for (Eigen::Index r = 0; r < params[i]->b.size(); ++r) check_one(params[i]->b(r), grads[i].b(r));
    }
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("dimension errors") {
  const auto m = hydra::VaeModel::initialize(7, tiny_config());
  CHECK_THROWS_AS(hydra::elbo_loss(m, Eigen::MatrixXd::Zero(6, 2), Eigen::MatrixXd::Zero(2, 2)), hydra::Error);
  CHECK_THROWS_AS(hydra::elbo_loss(m, Eigen::MatrixXd::Zero(7, 2), Eigen::MatrixXd::Zero(3, 2)), hydra::Error);
  CHECK_THROWS_AS(hydra::encode_latent(m, hydra::FusedVector{std::vector<double>(8, 0.0)}), hydra::Error);
}

TEST_CASE("training learns to reconstruct and is deterministic") {
  hydra::Rng rng(23);
  std::vector<hydra::FusedVector> data;
  for (int i = 0; i < 40; ++i) {
    hydra::FusedVector v;
    const double t = rng.uniform(-1, 1);
    for (int j = 0; j < 7; ++j) v.values.push_back(std::sin(t * (j + 1)));
    data.push_back(v);
  }
  auto cfg = tiny_config();
  cfg.epochs = 150;
  cfg.batch_size = 8;
  cfg.learning_rate = 5e-3;
  const auto a = hydra::train_vae(data, cfg);
  const auto b = hydra::train_vae(data, cfg);
  REQUIRE(a.trace.size() == 150);
  CHECK(a.model.best_epoch >= 1);
  CHECK(a.trace[a.model.best_epoch - 1].validation.total <= a.trace.front().validation.total);
  CHECK(a.trace.back().train.total < a.trace.front().train.total);
  for (std::size_t i = 0; i < a.model.layers().size(); ++i) {
    CHECK(a.model.layers()[i]->w == b.model.layers()[i]->w);
    CHECK(a.model.layers()[i]->b == b.model.layers()[i]->b);
  }
  const auto mu = hydra::encode_latent(a.model, data[0], "x");
  CHECK(mu.values.size() == 2);
  CHECK(mu.function_id == "x");
  CHECK(hydra::reconstruct(a.model, data[0]).size() == 7);
}

TEST_CASE("training rejects tiny or non-finite inputs") {
  std::vector<hydra::FusedVector> few(5, hydra::FusedVector{std::vector<double>(7, 0.0)});
  try {
    hydra::train_vae(few, tiny_config());
    FAIL("expected an error");
  } catch (const hydra::Error& e) {
    CHECK(e.code() == hydra::ErrorCode::kTooFewSamples);
  }
  std::vector<hydra::FusedVector> bad(12, hydra::FusedVector{std::vector<double>(7, 0.0)});
  bad[3].values[2] = std::nan("");
  CHECK_THROWS_AS(hydra::train_vae(bad, tiny_config()), hydra::Error);
}

TEST_CASE("an absurd learning rate surfaces as NonFiniteLoss") {
  hydra::Rng rng(2);
  std::vector<hydra::FusedVector> data;
  for (int i = 0; i < 20; ++i) {
    hydra::FusedVector v;
    for (int j = 0; j < 7; ++j) v.values.push_back(rng.normal() * 100);
    data.push_back(v);
  }
  auto cfg = tiny_config();
  cfg.learning_rate = 1e6;
  cfg.epochs = 50;
  try {
    hydra::train_vae(data, cfg);
    FAIL("expected divergence");
  } catch (const hydra::Error& e) {
    CHECK(e.code() == hydra::ErrorCode::kNonFiniteLoss);
  }
}

}  // TEST_SUITE
