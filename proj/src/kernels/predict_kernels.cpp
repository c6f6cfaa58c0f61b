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

#include "advids/error.hpp"
#include "advids/kernels.hpp"

namespace advids::kernels {

namespace {

inline void score_row(std::span<const Tree> trees, std::span<const double> base,
                      std::span<const double> x, double* out) {
  const std::size_t k = base.size();
  std::copy(base.begin(), base.end(), out);
  for (std::size_t t = 0; t < trees.size(); ++t) out[t % k] += trees[t].predict(x);
}

void check(std::span<const Tree> trees, std::span<const double> base, const FeatureMatrix& X,
           std::span<double> scores) {
  require(!base.empty() && trees.size() % base.size() == 0, ErrorCategory::invalid_argument,
          "predict: tree count is not a multiple of the class count");
  require(scores.size() == X.n_rows() * base.size(), ErrorCategory::invalid_argument,
          "predict: score buffer has the wrong size");
}

}  // namespace

namespace serial {

void predict_scores(std::span<const Tree> trees, std::span<const double> base,
                    const FeatureMatrix& X, std::span<double> scores) {
  check(trees, base, X, scores);
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    score_row(trees, base, X.row(i), scores.data() + i * base.size());
  }
}

}  // namespace serial

namespace omp {

void predict_scores(std::span<const Tree> trees, std::span<const double> base,
                    const FeatureMatrix& X, std::span<double> scores) {
  check(trees, base, X, scores);
  const auto n = static_cast<std::int64_t>(X.n_rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    score_row(trees, base, X.row(row), scores.data() + row * base.size());
  }
}

}  // namespace omp

}  // namespace advids::kernels
