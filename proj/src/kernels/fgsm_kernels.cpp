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

#include <omp.h>

#include <algorithm>
#include <vector>

#include "advids/kernels.hpp"

namespace advids::kernels {

namespace {

inline void fgsm_row(const SurrogateParams& p, std::span<const double> x, std::int32_t y,
                     const AttackConfig& cfg, std::span<double> out, std::span<double> grad,
                     std::span<double> scratch) {
  input_gradient(p, x, y, grad, scratch);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const int s = (grad[j] > 0.0) - (grad[j] < 0.0);
    // sign(0) = 0 and epsilon = 0 both leave the entry bit-identical.
    if (s == 0 || cfg.epsilon == 0.0 || !cfg.perturbs(j)) {
      out[j] = x[j];
    } else {
      out[j] = std::clamp(x[j] + cfg.epsilon * s, cfg.clip_min, cfg.clip_max);
    }
  }
}

}  // namespace

namespace serial {

void fgsm_rows(const SurrogateParams& p, const FeatureMatrix& X, std::span<const std::int32_t> y,
               const AttackConfig& cfg, FeatureMatrix& out) {
  std::vector<double> grad(p.n_features);
  std::vector<double> scratch(p.n_classes);
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    fgsm_row(p, X.row(i), y[i], cfg, out.row(i), grad, scratch);
  }
}

}  // namespace serial

namespace omp {

void fgsm_rows(const SurrogateParams& p, const FeatureMatrix& X, std::span<const std::int32_t> y,
               const AttackConfig& cfg, FeatureMatrix& out) {
  const auto n = static_cast<std::int64_t>(X.n_rows());
#pragma omp parallel
  {
    std::vector<double> grad(p.n_features);
    std::vector<double> scratch(p.n_classes);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::size_t>(i);
      fgsm_row(p, X.row(r), y[r], cfg, out.row(r), grad, scratch);
    }
  }
}

}  // namespace omp

}  // namespace advids::kernels
