// Copyright 2026 The advids Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "advids/preprocess.hpp"
#include "json.hpp"

namespace advids {

/// Multinomial logistic regression: scores = W^T x + b.
///
/// The booster has no input gradient, so FGSM directions are taken from
/// this differentiable stand-in trained on the same clean rows. Its input
/// gradient has the closed form W (softmax(W^T x + b) - onehot(y)).
struct SurrogateParams {
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::vector<double> weights;  // n_features x n_classes, row-major
  std::vector<double> bias;     // n_classes

  static SurrogateParams zeros(std::size_t n_features, std::size_t n_classes);

  double weight(std::size_t feature, std::size_t cls) const {
    return weights[feature * n_classes + cls];
  }
  /// Throws invalid-argument on inconsistent shapes or non-finite entries.
  void validate() const;
  std::string content_hash() const;

  bool operator==(const SurrogateParams&) const = default;
};

void to_json(nlohmann::json& j, const SurrogateParams& p);
void from_json(const nlohmann::json& j, SurrogateParams& p);

struct SurrogateTrainCfg {
  std::size_t epochs = 30;
  double step_size = 0.1;
  double l2 = 1e-4;
  std::size_t batch_size = 256;
  std::uint64_t seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const SurrogateTrainCfg& c);
void from_json(const nlohmann::json& j, SurrogateTrainCfg& c);

struct SurrogateTrainLog {
  /// Regularized objective before training, then after each epoch.
  std::vector<double> objective;
};

/// Seeded mini-batch gradient descent on mean cross-entropy + (l2/2)|W|^2,
/// starting from all-zero parameters.
SurrogateParams train_surrogate(const FeatureMatrix& X, const LabelVector& y,
                                std::size_t n_classes, const SurrogateTrainCfg& cfg,
                                SurrogateTrainLog* log = nullptr);

/// Class scores W^T x + b into `scores` (size n_classes).
void surrogate_scores(const SurrogateParams& p, std::span<const double> x,
                      std::span<double> scores);

/// Softmax cross-entropy at label y.
double surrogate_loss(const SurrogateParams& p, std::span<const double> x, std::int32_t y);

/// Gradient of surrogate_loss with respect to x.
std::vector<double> input_gradient(const SurrogateParams& p, std::span<const double> x,
                                   std::int32_t y);
/// Allocation-free form; `scratch` needs n_classes entries.
void input_gradient(const SurrogateParams& p, std::span<const double> x, std::int32_t y,
                    std::span<double> grad, std::span<double> scratch);

/// Mean cross-entropy + (l2/2)|W|^2 over a dataset.
double surrogate_objective(const SurrogateParams& p, const FeatureMatrix& X, const LabelVector& y,
                           double l2);

LabelVector surrogate_predict(const SurrogateParams& p, const FeatureMatrix& X);

}  // namespace advids
