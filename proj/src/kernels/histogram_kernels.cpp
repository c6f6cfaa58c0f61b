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

#include "advids/kernels.hpp"

namespace advids::kernels {

namespace serial {

void build_histogram(const BinnedMatrix& binned, std::span<const std::uint32_t> rows,
                     std::span<const GradPair> gpair, std::span<HistBin> hist) {
  std::fill(hist.begin(), hist.end(), HistBin{});
  const std::size_t d = binned.n_features();
  for (std::uint32_t r : rows) {
    const GradPair gp = gpair[r];
    for (std::size_t f = 0; f < d; ++f) {
      hist[binned.hist_offset[f] + binned.bins[f * binned.n_rows + r]].add(gp);
    }
  }
}

}  // namespace serial

namespace omp {

namespace {
// Below this many row-feature updates the fork/join costs more than it saves.
constexpr std::size_t kMinParallelWork = 1 << 15;
}  // namespace

void build_histogram(const BinnedMatrix& binned, std::span<const std::uint32_t> rows,
                     std::span<const GradPair> gpair, std::span<HistBin> hist) {
  const auto d = static_cast<std::int64_t>(binned.n_features());
  const bool parallel = rows.size() * binned.n_features() >= kMinParallelWork;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t f = 0; f < d; ++f) {
    HistBin* h = hist.data() + binned.hist_offset[static_cast<std::size_t>(f)];
    std::fill(h, h + binned.n_bins(static_cast<std::size_t>(f)), HistBin{});
    const std::uint16_t* col = binned.bins.data() + static_cast<std::size_t>(f) * binned.n_rows;
    for (std::uint32_t r : rows) h[col[r]].add(gpair[r]);
  }
}

}  // namespace omp

}  // namespace advids::kernels
