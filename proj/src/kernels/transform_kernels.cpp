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
#include <cmath>

#include "advids/error.hpp"
#include "advids/kernels.hpp"

namespace advids::kernels {

TransformPlan make_transform_plan(const FlowTable& table, const PreprocessStats& stats) {
  require(table.schema() == stats.schema(), ErrorCategory::schema_mismatch,
          "transform: table schema does not match fitted stats");
  TransformPlan plan;
  plan.n_rows = table.n_rows();
  for (std::size_t j = 0; j < stats.n_features(); ++j) {
    const ColumnStats& cs = stats.column(j);
    TransformColumn col;
    col.kind = cs.kind;
    if (cs.kind == ColumnKind::numeric) {
      col.numeric = table.numeric_values(j);
      col.fill = cs.mean;
      col.min = cs.min;
      col.range = cs.max - cs.min;
    } else {
      col.codes = table.category_codes(j);
      // Codes 0..k-1 are rescaled by the code range k-1.
      const auto k = cs.categories.size();
      const double span = k > 1 ? static_cast<double>(k - 1) : 0.0;
      auto scaled = [span](std::int32_t code) {
        return span > 0.0 ? static_cast<double>(code) / span : 0.0;
      };
      for (const auto& value : table.category_dictionary(j)) {
        col.code_value.push_back(scaled(stats.category_code(j, value)));
      }
      col.missing_value = scaled(stats.missing_code(j));
    }
    plan.columns.push_back(std::move(col));
  }
  plan.label_codes = table.label_codes();
  for (const auto& label : table.label_dictionary()) {
    plan.label_map.push_back(stats.encode_label(label));
  }
  return plan;
}

namespace {

inline double scale_numeric(const TransformColumn& c, double v) {
  if (std::isnan(v)) v = c.fill;
  if (c.range == 0.0) return 0.0;
  // Rows outside the fitted range (fit-on-train-only) are clamped into [0, 1].
  return std::clamp((v - c.min) / c.range, 0.0, 1.0);
}

inline void transform_block(const TransformPlan& plan, std::size_t begin, std::size_t end,
                            std::span<double> out, std::span<std::int32_t> labels) {
  const std::size_t d = plan.columns.size();
  for (std::size_t j = 0; j < d; ++j) {
    const TransformColumn& c = plan.columns[j];
    if (c.kind == ColumnKind::numeric) {
      for (std::size_t i = begin; i < end; ++i) out[(i - begin) * d + j] = scale_numeric(c, c.numeric[i]);
    } else {
      for (std::size_t i = begin; i < end; ++i) {
        const std::int32_t code = c.codes[i];
        out[(i - begin) * d + j] =
            code < 0 ? c.missing_value : c.code_value[static_cast<std::size_t>(code)];
      }
    }
  }
  for (std::size_t i = begin; i < end; ++i) {
    labels[i - begin] = plan.label_map[static_cast<std::size_t>(plan.label_codes[i])];
  }
}

}  // namespace

namespace serial {

void transform_rows(const TransformPlan& plan, std::size_t begin, std::size_t end,
                    std::span<double> out, std::span<std::int32_t> labels) {
  const std::size_t d = plan.columns.size();
  transform_block(plan, begin, end, out.subspan(begin * d, (end - begin) * d),
                  labels.subspan(begin, end - begin));
}

}  // namespace serial

namespace omp {

void transform_rows(const TransformPlan& plan, std::size_t chunk_rows, std::size_t workers,
                    std::span<double> out, std::span<std::int32_t> labels) {
  const std::size_t n = plan.n_rows;
  const std::size_t d = plan.columns.size();
  const std::size_t chunk = std::max<std::size_t>(1, chunk_rows);
  const auto n_chunks = static_cast<std::int64_t>((n + chunk - 1) / chunk);
  // Each chunk owns a disjoint row range of the output, so the merge is the
  // identity placement and no ordering step is needed.
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(workers))
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    transform_block(plan, begin, end, out.subspan(begin * d, (end - begin) * d),
                    labels.subspan(begin, end - begin));
  }
}

}  // namespace omp

}  // namespace advids::kernels
