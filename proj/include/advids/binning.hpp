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
#include <vector>

#include "advids/preprocess.hpp"

namespace advids {

/// Per-feature ascending cut values. A value x falls in the first bin whose
/// cut is >= x (values above the last cut are clamped into the last bin).
struct BinCuts {
  std::vector<std::vector<double>> cuts;

  std::size_t n_features() const { return cuts.size(); }
  std::uint16_t bin_of(std::size_t feature, double x) const;
};

/// Quantile cuts from the training matrix. Features with at most `max_bins`
/// distinct values get one bin per value; others get count-balanced cuts
/// placed on distinct values.
BinCuts compute_cuts(const FeatureMatrix& X, std::size_t max_bins);

/// Feature-major bin indices plus histogram layout.
struct BinnedMatrix {
  std::size_t n_rows = 0;
  std::vector<std::uint16_t> bins;        // feature f occupies [f*n_rows, (f+1)*n_rows)
  std::vector<std::size_t> hist_offset;   // size n_features + 1

  std::size_t n_features() const { return hist_offset.size() - 1; }
  std::size_t hist_size() const { return hist_offset.back(); }
  std::size_t n_bins(std::size_t f) const { return hist_offset[f + 1] - hist_offset[f]; }
  std::span<const std::uint16_t> column(std::size_t f) const {
    return {bins.data() + f * n_rows, n_rows};
  }
};

BinnedMatrix bin_matrix(const FeatureMatrix& X, const BinCuts& cuts);

}  // namespace advids
