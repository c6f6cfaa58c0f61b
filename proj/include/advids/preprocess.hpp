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
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advids/flowdata.hpp"
#include "json.hpp"

namespace advids {

/// Placeholder category assigned to missing (and unseen) categorical cells.
inline constexpr std::string_view kMissingCategory = "missing";

struct ColumnStats {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  // numeric columns, in the column's own units
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  // categorical columns: sorted distinct values, always containing "missing"
  std::vector<std::string> categories;

  bool operator==(const ColumnStats&) const = default;
};

/// Fitted imputation, scaling and encoding parameters.
class PreprocessStats {
 public:
  PreprocessStats() = default;
  PreprocessStats(FlowSchema schema, std::vector<ColumnStats> columns,
                  std::vector<std::string> labels, std::size_t n_rows_fitted);

  const FlowSchema& schema() const { return schema_; }
  std::span<const ColumnStats> columns() const { return columns_; }
  const ColumnStats& column(std::size_t j) const { return columns_.at(j); }
  std::size_t n_features() const { return columns_.size(); }
  std::size_t n_rows_fitted() const { return n_rows_fitted_; }

  /// Lexicographically ordered class names; index = class code.
  std::span<const std::string> labels() const { return labels_; }
  std::size_t n_classes() const { return labels_.size(); }

  /// Class code of a label text; unknown-label error if absent.
  std::int32_t encode_label(std::string_view label) const;
  const std::string& decode_label(std::int32_t code) const;

  /// Code of a category in column j; unseen values map to the placeholder.
  std::int32_t category_code(std::size_t j, std::string_view value) const;
  std::int32_t missing_code(std::size_t j) const;

  std::vector<std::string> feature_names() const;
  std::vector<ColumnKind> feature_kinds() const;

  bool operator==(const PreprocessStats&) const = default;

 private:
  FlowSchema schema_;
  std::vector<ColumnStats> columns_;
  std::vector<std::string> labels_;
  std::size_t n_rows_fitted_ = 0;
};

void to_json(nlohmann::json& j, const PreprocessStats& s);
void from_json(const nlohmann::json& j, PreprocessStats& s);

/// Streaming fit: feed chunks in row order, then finish(). Feeding a table
/// in any chunking yields the same stats as feeding it whole.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(FlowSchema schema);

  void add(const FlowTable& chunk);
  PreprocessStats finish() const;

 private:
  struct NumericAcc {
    double sum = 0.0;
    std::size_t count = 0;
    double min = 0.0;
    double max = 0.0;
  };
  FlowSchema schema_;
  std::vector<NumericAcc> numeric_;
  std::vector<std::set<std::string>> categories_;
  std::set<std::string> labels_;
  std::size_t n_rows_ = 0;
};

PreprocessStats fit_stats(const FlowTable& table);

/// Dense row-major n x d matrix of scaled features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n_rows, std::vector<std::string> names, std::vector<ColumnKind> kinds);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return names_.size(); }

  std::span<double> row(std::size_t i) { return {data_.data() + i * n_cols(), n_cols()}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_cols(), n_cols()}; }
  double& at(std::size_t i, std::size_t j) { return data_[i * n_cols() + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_cols() + j]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<const std::string> names() const { return names_; }
  std::span<const ColumnKind> kinds() const { return kinds_; }

  /// Appends the rows of `other` (same columns).
  void append(const FeatureMatrix& other);
  FeatureMatrix select(std::span<const std::size_t> rows) const;

  /// Bitwise equality of shape, names, kinds and every entry.
  friend bool bit_equal(const FeatureMatrix& a, const FeatureMatrix& b);

 private:
  std::size_t n_rows_ = 0;
  std::vector<std::string> names_;
  std::vector<ColumnKind> kinds_;
  std::vector<double> data_;
};

using LabelVector = std::vector<std::int32_t>;

LabelVector select_labels(const LabelVector& y, std::span<const std::size_t> rows);

struct Dataset {
  FeatureMatrix X;
  LabelVector y;
};

/// Imputes, min-max scales into [0, 1] and label-encodes `table`.
Dataset transform(const FlowTable& table, const PreprocessStats& stats);

/// Same result as transform(), bit for bit, computed over independent row
/// chunks by `workers` threads.
Dataset transform_parallel(const FlowTable& table, const PreprocessStats& stats,
                           std::size_t chunk_rows, std::size_t workers);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  bool stratified = false;
};

void to_json(nlohmann::json& j, const SplitIndices& s);

/// Seeded shuffle of 0..n-1; the first floor(fraction * n) are train.
SplitIndices split(std::size_t n_rows, double train_fraction, std::uint64_t seed);

/// Per-class seeded split. The train total is still floor(fraction * n);
/// each class receives within one row of fraction * n_class. Index lists
/// are ascending.
SplitIndices stratified_split(std::span<const std::int32_t> labels, double train_fraction,
                              std::uint64_t seed);

/// Two passes over a flow CSV in bounded chunks: fit, then transform. Only
/// one chunk of raw records is resident at a time.
struct StreamedPreprocess {
  PreprocessStats stats;
  Dataset data;
};
StreamedPreprocess preprocess_csv_streaming(const std::filesystem::path& path,
                                            const FlowSchema& schema, std::size_t chunk_rows,
                                            std::size_t workers);

}  // namespace advids
