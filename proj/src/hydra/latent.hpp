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

#ifndef HYDRA_LATENT_HPP_
#define HYDRA_LATENT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hydra/embed.hpp"
#include "hydra/heuristics.hpp"

namespace hydra {

inline constexpr std::size_t kDefaultHeuristicWidth = 5;
inline constexpr std::size_t kFusedDim = kEmbeddingDim + kDefaultHeuristicWidth;

// [embedding | heuristic bits]. 773 wide with the default rule set.
struct FusedVector {
  std::vector<double> values;
};

FusedVector fuse(const Embedding& e, const HeuristicVector& h);
FusedVector fuse(const std::vector<double>& embedding, const std::vector<std::uint8_t>& bits);

// Test-time input: heuristic slots are left at zero.
FusedVector project_for_test(const Embedding& e,
                             std::size_t heuristic_width = kDefaultHeuristicWidth);

struct VaeConfig {
  std::size_t latent_dim = 16;
  std::vector<std::size_t> hidden_dims = {256, 64};
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double kl_weight = 1.0;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;
};

// Throws kInvalidArgument on out-of-range fields.
void validate(const VaeConfig& cfg);

// Affine layer y = W x + b, W is out x in.
struct Dense {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
};

inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 10.0;

// Encoder: input -> hidden_dims (tanh) -> {mu, logvar}.
// Decoder: latent -> reversed hidden_dims (tanh) -> input (linear).
struct VaeModel {
  std::size_t input_dim = 0;
  VaeConfig config;
  std::vector<Dense> encoder;
  Dense mu_head;
  Dense logvar_head;
  std::vector<Dense> decoder;  // last layer is the linear output
  std::size_t best_epoch = 0;  // 1-based; 0 for an untrained model

  // Xavier-uniform weights, zero biases, drawn from config.seed.
  static VaeModel initialize(std::size_t input_dim, const VaeConfig& cfg);
  static VaeModel zeros(std::size_t input_dim, const VaeConfig& cfg);

  std::size_t latent_dim() const { return static_cast<std::size_t>(mu_head.w.rows()); }

  // Every layer in a fixed order: encoder, mu, logvar, decoder.
  std::vector<Dense*> layers();
  std::vector<const Dense*> layers() const;
  bool finite() const;
};

// Averages over the batch. reconstruction is the per-sample squared error
// ||x_hat - x||^2, kl is 1/2 sum_j (mu^2 + sigma^2 - log sigma^2 - 1), and
// mse is the squared error per element.
struct LossBreakdown {
  double reconstruction = 0.0;
  double kl = 0.0;
  double total = 0.0;
  double mse = 0.0;
};

struct EpochLoss {
  LossBreakdown train;
  LossBreakdown validation;
};

using LossTrace = std::vector<EpochLoss>;

// Columns of `batch` are samples. `noise` is latent_dim x batch; z = mu +
// sigma * noise. A zero noise matrix gives the deterministic reconstruction.
LossBreakdown elbo_loss(const VaeModel& model, const Eigen::MatrixXd& batch,
                        const Eigen::MatrixXd& noise);

// Loss plus d(total)/d(parameter) for every layer, in VaeModel::layers() order.
LossBreakdown elbo_gradients(const VaeModel& model, const Eigen::MatrixXd& batch,
                             const Eigen::MatrixXd& noise, std::vector<Dense>& grads);

Eigen::MatrixXd to_matrix(const std::vector<FusedVector>& data);

struct TrainResult {
  VaeModel model;
  LossTrace trace;
};

// Minibatch SGD with momentum. Keeps the weights of the epoch with the lowest
// validation loss. Throws kTooFewSamples (< 10 vectors), kDimensionMismatch,
// kNonFiniteLoss.
TrainResult train_vae(const std::vector<FusedVector>& data, const VaeConfig& cfg);

struct LatentPoint {
  std::vector<double> values;
  std::string function_id;
};

// Posterior mean; no sampling.
LatentPoint encode_latent(const VaeModel& model, const FusedVector& v,
                          std::string function_id = {});

std::vector<LatentPoint> encode_all(const VaeModel& model, const std::vector<FusedVector>& data,
                                    const std::vector<std::string>& ids);

// Decoder applied to the posterior mean.
std::vector<double> reconstruct(const VaeModel& model, const FusedVector& v);

}  // namespace hydra

#endif  // HYDRA_LATENT_HPP_
