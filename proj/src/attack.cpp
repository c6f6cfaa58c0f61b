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

#include "advids/attack.hpp"

#include <cmath>

#include "advids/error.hpp"
#include "advids/kernels.hpp"

namespace advids {

void AttackConfig::validate(std::size_t n_features) const {
  require(epsilon >= 0.0 && std::isfinite(epsilon), ErrorCategory::invalid_argument,
          "attack epsilon must be finite and nonnegative");
  require(!std::isnan(clip_min) && !std::isnan(clip_max) && clip_min <= clip_max,
          ErrorCategory::invalid_argument, "attack clip bounds need clip_min <= clip_max");
  require(perturb_mask.empty() || perturb_mask.size() == n_features,
          ErrorCategory::invalid_argument, "attack perturb_mask length differs from feature count");
}

void to_json(nlohmann::json& j, const AttackConfig& c) {
  j = {{"epsilon", c.epsilon}, {"clip_min", c.clip_min}, {"clip_max", c.clip_max}};
  j["perturb_mask"] = c.perturb_mask.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.perturb_mask);
}

void from_json(const nlohmann::json& j, AttackConfig& c) {
  AttackConfig d;
  c.epsilon = j.value("epsilon", d.epsilon);
  c.clip_min = j.value("clip_min", d.clip_min);
  c.clip_max = j.value("clip_max", d.clip_max);
  c.perturb_mask.clear();
  if (j.contains("perturb_mask") && !j.at("perturb_mask").is_null()) {
    c.perturb_mask = j.at("perturb_mask").get<std::vector<bool>>();
  }
}

std::vector<bool> numeric_only_mask(const FeatureMatrix& X) {
  std::vector<bool> mask;
  for (auto kind : X.kinds()) mask.push_back(kind == ColumnKind::numeric);
  return mask;
}

namespace {

void check_inputs(const SurrogateParams& p, const FeatureMatrix& X, const LabelVector& y) {
  p.validate();
  require(X.n_cols() == p.n_features, ErrorCategory::invalid_argument,
          "attack: matrix width differs from surrogate dimensionality");
  require(y.size() == X.n_rows(), ErrorCategory::invalid_argument,
          "attack: label count differs from row count");
  for (auto label : y) {
    require(label >= 0 && static_cast<std::size_t>(label) < p.n_classes,
            ErrorCategory::invalid_argument, "attack: label out of range");
  }
}

}  // namespace

std::vector<std::int8_t> gradient_signs(const SurrogateParams& p, const FeatureMatrix& X,
                                        const LabelVector& y) {
  check_inputs(p, X, y);
  std::vector<std::int8_t> out(X.n_rows() * X.n_cols());
  std::vector<double> grad(p.n_features);
  std::vector<double> scratch(p.n_classes);
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    input_gradient(p, X.row(i), y[i], grad, scratch);
    for (std::size_t j = 0; j < grad.size(); ++j) {
      out[i * X.n_cols() + j] = static_cast<std::int8_t>((grad[j] > 0.0) - (grad[j] < 0.0));
    }
  }
  return out;
}

FeatureMatrix fgsm_batch(const SurrogateParams& p, const FeatureMatrix& X, const LabelVector& y,
                         const AttackConfig& cfg) {
  check_inputs(p, X, y);
  cfg.validate(X.n_cols());
  for (double v : X.values()) {
    require(v >= cfg.clip_min && v <= cfg.clip_max, ErrorCategory::invalid_argument,
            "attack: input entries must lie within [clip_min, clip_max]");
  }
  FeatureMatrix out = X;
  kernels::omp::fgsm_rows(p, X, y, cfg, out);
  return out;
}

std::vector<SweepPoint> epsilon_sweep(const SurrogateParams& p, const Ensemble& model,
                                      const FeatureMatrix& X, const LabelVector& y,
                                      std::span<const double> epsilons, const AttackConfig& base) {
  require(!epsilons.empty(), ErrorCategory::invalid_argument, "sweep: no epsilons given");
  require(X.n_rows() > 0, ErrorCategory::invalid_argument, "sweep: empty evaluation set");
  auto accuracy = [&](const LabelVector& pred) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hits += pred[i] == y[i];
    return static_cast<double>(hits) / static_cast<double>(y.size());
  };
  std::vector<SweepPoint> out;
  for (double eps : epsilons) {
    require(eps >= 0.0, ErrorCategory::invalid_argument, "sweep: epsilons must be nonnegative");
    AttackConfig cfg = base;
    cfg.epsilon = eps;
    const FeatureMatrix adv = fgsm_batch(p, X, y, cfg);
    out.push_back({eps, accuracy(surrogate_predict(p, adv)), accuracy(predict_class(model, adv))});
  }
  return out;
}

}  // namespace advids
