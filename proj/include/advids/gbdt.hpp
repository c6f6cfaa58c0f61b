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
#include "advids/tree.hpp"
#include "json.hpp"

namespace advids {

struct Hyperparams {
  std::size_t max_depth = 5;
  double learning_rate = 0.1;
  std::size_t rounds = 100;
  double reg_lambda = 1.0;
  double min_split_gain = 0.0;
  double min_child_weight = 1.0;
  std::size_t n_bins = 256;
  std::size_t n_classes = 0;

  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

void to_json(nlohmann::json& j, const Hyperparams& hp);
void from_json(const nlohmann::json& j, Hyperparams& hp);

/// Hessian floor applied to every p(1 - p) term.
inline constexpr double kHessianFloor = 1e-16;

/// Relative width of a gain tie: candidates within this fraction of the
/// best gain count as equal and the lowest (feature, threshold) wins. The
/// same width against the parent score is the margin a gain must clear above
/// min_split_gain.
inline constexpr double kGainTieTolerance = 1e-10;

/// Numerically stable softmax (max-subtracted). Throws on non-finite input.
std::vector<double> softmax(std::span<const double> scores);
void softmax_inplace(std::span<double> scores);

struct GradHess {
  std::vector<double> g;
  std::vector<double> h;
};

/// Per-class gradient and hessian of the softmax log-loss w.r.t. scores:
/// g_k = p_k - [k == label], h_k = max(p_k (1 - p_k), 1e-16).
GradHess grad_hess(std::span<const double> probs, std::int32_t label);

class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(Hyperparams hp, std::size_t n_features);

  const Hyperparams& hyperparams() const { return hp_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return hp_.n_classes; }
  std::size_t n_rounds() const { return n_classes() == 0 ? 0 : trees_.size() / n_classes(); }

  std::span<const double> base_score() const { return base_score_; }
  std::span<const Tree> trees() const { return trees_; }
  /// Tree for class `cls` in boosting round `round`.
  const Tree& tree(std::size_t round, std::size_t cls) const {
    return trees_[round * n_classes() + cls];
  }

  void add_round(std::vector<Tree> per_class);

  nlohmann::json to_json() const;
  static Ensemble from_json(const nlohmann::json& j);
  /// SHA-256 of the serialized document.
  std::string content_hash() const;

  bool operator==(const Ensemble&) const = default;

 private:
  Hyperparams hp_;
  std::size_t n_features_ = 0;
  std::vector<double> base_score_;
  std::vector<Tree> trees_;  // round-major: rounds x n_classes
};

struct TrainLog {
  /// Training-set log-loss after each round.
  std::vector<double> logloss;
};

/// Second-order histogram boosting with the softmax objective. One tree per
/// class per round, grown depth-wise to max_depth.
Ensemble train(const FeatureMatrix& X, const LabelVector& y, const Hyperparams& hp,
               TrainLog* log = nullptr);

/// Row-major n x K probabilities.
struct ProbaMatrix {
  std::size_t n_rows = 0;
  std::size_t n_classes = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_classes, n_classes};
  }
};

/// Raw additive scores (base score plus tree outputs), row-major n x K.
std::vector<double> predict_scores(const Ensemble& m, const FeatureMatrix& X);
ProbaMatrix predict_proba(const Ensemble& m, const FeatureMatrix& X);
LabelVector predict_class(const Ensemble& m, const FeatureMatrix& X);

/// Row argmax with ties going to the lowest class index.
LabelVector argmax_rows(const ProbaMatrix& p);

/// Mean negative log-probability of the true class, clamped to
/// [1e-15, 1 - 1e-15].
double logloss(const ProbaMatrix& p, const LabelVector& y);

struct FeatureGain {
  std::size_t feature = 0;
  double gain = 0.0;
};

/// Total realized split gain per feature over all trees, descending, ties
/// by feature index. Features never split on are omitted.
std::vector<FeatureGain> feature_importance(const Ensemble& m);

}  // namespace advids
