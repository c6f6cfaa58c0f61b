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

namespace advids {

struct GradPair {
  double g = 0.0;
  double h = 0.0;

  GradPair& operator+=(const GradPair& o) {
    g += o.g;
    h += o.h;
    return *this;
  }
  friend GradPair operator-(GradPair a, const GradPair& b) { return {a.g - b.g, a.h - b.h}; }
};

/// Histogram cell: gradient/hessian sums plus the row count.
struct HistBin {
  double g = 0.0;
  double h = 0.0;
  std::int64_t count = 0;

  void add(const GradPair& gp) {
    g += gp.g;
    h += gp.h;
    ++count;
  }
  HistBin& operator-=(const HistBin& o) {
    g -= o.g;
    h -= o.h;
    count -= o.count;
    return *this;
  }
};

/// Regression tree in flat node arrays. Node 0 is the root; a node with
/// feature == kLeaf is a leaf whose value is the (already shrunk) weight.
/// Internal nodes route x[feature] <= threshold to the left child.
struct Tree {
  static constexpr std::int32_t kLeaf = -1;

  std::vector<std::int32_t> feature;
  std::vector<double> threshold;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::vector<double> value;
  std::vector<double> gain;  // realized split gain; 0 on leaves

  std::size_t size() const { return feature.size(); }
  bool is_leaf(std::size_t node) const { return feature[node] == kLeaf; }

  std::int32_t add_leaf(double weight);
  /// Index of the leaf reached by `x`.
  std::size_t leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return value[leaf_index(x)]; }
  /// Longest root-to-leaf path length in edges.
  std::size_t depth() const;

  bool operator==(const Tree&) const = default;
};

}  // namespace advids
