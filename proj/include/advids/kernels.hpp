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

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp; each output element
// is computed by the same arithmetic in both, so results are bit-identical
// regardless of thread count or scheduling.

#include <cstdint>
#include <span>
#include <vector>

#include "advids/attack.hpp"
#include "advids/binning.hpp"
#include "advids/flowdata.hpp"
#include "advids/preprocess.hpp"
#include "advids/surrogate.hpp"
#include "advids/tree.hpp"

namespace advids::kernels {

struct TransformColumn {
  ColumnKind kind = ColumnKind::numeric;
  std::span<const double> numeric;
  double fill = 0.0;
  double min = 0.0;
  double range = 0.0;
  std::span<const std::int32_t> codes;
  std::vector<double> code_value;  // table dictionary code -> scaled code
  double missing_value = 0.0;
};

/// Read-only view of a FlowTable bound to fitted stats.
struct TransformPlan {
  std::size_t n_rows = 0;
  std::vector<TransformColumn> columns;
  std::span<const std::int32_t> label_codes;
  std::vector<std::int32_t> label_map;  // table dictionary code -> class index
};

/// Fails with unknown-label if the table holds a label absent from stats.
TransformPlan make_transform_plan(const FlowTable& table, const PreprocessStats& stats);

namespace serial {

void transform_rows(const TransformPlan& plan, std::size_t begin, std::size_t end,
                    std::span<double> out, std::span<std::int32_t> labels);

/// hist[hist_offset[f] + bin] accumulates gpair over `rows`, in row order.
void build_histogram(const BinnedMatrix& binned, std::span<const std::uint32_t> rows,
                     std::span<const GradPair> gpair, std::span<HistBin> hist);

/// scores[i*K + k] = base[k] + sum over rounds of trees[r*K + k](x_i).
void predict_scores(std::span<const Tree> trees, std::span<const double> base,
                    const FeatureMatrix& X, std::span<double> scores);

void fgsm_rows(const SurrogateParams& p, const FeatureMatrix& X, std::span<const std::int32_t> y,
               const AttackConfig& cfg, FeatureMatrix& out);

}  // namespace serial

namespace omp {

/// Chunks of `chunk_rows` rows are handed to `workers` threads.
void transform_rows(const TransformPlan& plan, std::size_t chunk_rows, std::size_t workers,
                    std::span<double> out, std::span<std::int32_t> labels);

/// Parallel over features; each feature's bins are summed in row order.
void build_histogram(const BinnedMatrix& binned, std::span<const std::uint32_t> rows,
                     std::span<const GradPair> gpair, std::span<HistBin> hist);

void predict_scores(std::span<const Tree> trees, std::span<const double> base,
                    const FeatureMatrix& X, std::span<double> scores);

void fgsm_rows(const SurrogateParams& p, const FeatureMatrix& X, std::span<const std::int32_t> y,
               const AttackConfig& cfg, FeatureMatrix& out);

}  // namespace omp

}  // namespace advids::kernels
