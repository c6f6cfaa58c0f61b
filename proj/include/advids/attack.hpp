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

#include "advids/gbdt.hpp"
#include "advids/preprocess.hpp"
#include "advids/surrogate.hpp"
#include "json.hpp"

namespace advids {

struct AttackConfig {
  double epsilon = 0.1;  // in scaled-feature units
  double clip_min = 0.0;
  double clip_max = 1.0;
  /// Per-feature switch; empty means every feature is perturbed.
  std::vector<bool> perturb_mask;

  void validate(std::size_t n_features) const;
  bool perturbs(std::size_t feature) const {
    return perturb_mask.empty() || perturb_mask[feature];
  }
};

void to_json(nlohmann::json& j, const AttackConfig& c);
void from_json(const nlohmann::json& j, AttackConfig& c);

/// Mask that leaves categorical-coded columns untouched.
std::vector<bool> numeric_only_mask(const FeatureMatrix& X);

/// Per-entry sign of the surrogate's input gradient (-1, 0 or +1), row-major.
std::vector<std::int8_t> gradient_signs(const SurrogateParams& p, const FeatureMatrix& X,
                                        const LabelVector& y);

/// Single-step untargeted FGSM:
///   X_adv = clip(X + epsilon * sign(grad_x J(theta, X, y)), clip_min, clip_max)
/// with sign(0) = 0 and masked-off features copied through. Rows are
/// processed in parallel; the output is identical to the serial kernel.
FeatureMatrix fgsm_batch(const SurrogateParams& p, const FeatureMatrix& X, const LabelVector& y,
                         const AttackConfig& cfg);

struct SweepPoint {
  double epsilon = 0.0;
  double surrogate_accuracy = 0.0;
  double ensemble_accuracy = 0.0;
};

/// One FGSM generation per epsilon (other settings from `base`), scored on
/// both the surrogate and the booster.
std::vector<SweepPoint> epsilon_sweep(const SurrogateParams& p, const Ensemble& model,
                                      const FeatureMatrix& X, const LabelVector& y,
                                      std::span<const double> epsilons,
                                      const AttackConfig& base = {});

}  // namespace advids
