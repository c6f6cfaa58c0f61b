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

#include "advids/binning.hpp"

#include <algorithm>

#include "advids/error.hpp"

namespace advids {

std::uint16_t BinCuts::bin_of(std::size_t feature, double x) const {
  const auto& c = cuts[feature];
  const auto it = std::lower_bound(c.begin(), c.end(), x);
  const auto idx = static_cast<std::size_t>(it - c.begin());
  return static_cast<std::uint16_t>(std::min(idx, c.size() - 1));
}

BinCuts compute_cuts(const FeatureMatrix& X, std::size_t max_bins) {
  require(max_bins >= 2 && max_bins <= 65536, ErrorCategory::invalid_argument,
          "n_bins must lie in [2, 65536]");
  require(X.n_rows() > 0, ErrorCategory::empty_input, "cannot bin an empty matrix");
  const std::size_t n = X.n_rows();
  BinCuts out;
  out.cuts.resize(X.n_cols());
  std::vector<double> col(n);
  for (std::size_t f = 0; f < X.n_cols(); ++f) {
    for (std::size_t i = 0; i < n; ++i) col[i] = X.at(i, f);
    std::sort(col.begin(), col.end());

    std::vector<double>& cuts = out.cuts[f];
    std::vector<std::pair<double, std::size_t>> distinct;  // value, count
    for (double v : col) {
      if (distinct.empty() || distinct.back().first != v) {
        distinct.emplace_back(v, 1);
      } else {
        ++distinct.back().second;
      }
    }
    if (distinct.size() <= max_bins) {
      for (const auto& [v, count] : distinct) cuts.push_back(v);
      continue;
    }
    // Close bin b once the cumulative count reaches (b + 1) * n / max_bins.
    std::size_t cumulative = 0;
    for (const auto& [v, count] : distinct) {
      cumulative += count;
      if (cumulative * max_bins >= (cuts.size() + 1) * n) cuts.push_back(v);
    }
    if (cuts.back() != distinct.back().first) cuts.push_back(distinct.back().first);
  }
  return out;
}

BinnedMatrix bin_matrix(const FeatureMatrix& X, const BinCuts& cuts) {
  require(cuts.n_features() == X.n_cols(), ErrorCategory::invalid_argument,
          "bin cuts do not match the matrix width");
  BinnedMatrix out;
  out.n_rows = X.n_rows();
  out.bins.resize(X.n_rows() * X.n_cols());
  out.hist_offset.assign(X.n_cols() + 1, 0);
  for (std::size_t f = 0; f < X.n_cols(); ++f) {
    out.hist_offset[f + 1] = out.hist_offset[f] + cuts.cuts[f].size();
    std::uint16_t* dst = out.bins.data() + f * X.n_rows();
    for (std::size_t i = 0; i < X.n_rows(); ++i) dst[i] = cuts.bin_of(f, X.at(i, f));
  }
  return out;
}

}  // namespace advids
