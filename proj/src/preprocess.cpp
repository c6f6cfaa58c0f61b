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

#include "advids/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>

#include "advids/error.hpp"
#include "advids/kernels.hpp"
#include "advids/rng.hpp"

namespace advids {

// --- PreprocessStats -------------------------------------------------------

PreprocessStats::PreprocessStats(FlowSchema schema, std::vector<ColumnStats> columns,
                                 std::vector<std::string> labels, std::size_t n_rows_fitted)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      labels_(std::move(labels)),
      n_rows_fitted_(n_rows_fitted) {
  schema_.validate();
  require(columns_.size() == schema_.n_features(), ErrorCategory::invalid_argument,
          "stats: column count differs from schema");
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& c = columns_[j];
    require(c.name == schema_.feature_columns[j].name && c.kind == schema_.feature_columns[j].kind,
            ErrorCategory::invalid_argument, "stats: column '" + c.name + "' disagrees with schema");
    if (c.kind == ColumnKind::numeric) {
      require(c.min <= c.mean && c.mean <= c.max, ErrorCategory::invalid_argument,
              "stats: column '" + c.name + "' violates min <= mean <= max");
    } else {
      require(std::is_sorted(c.categories.begin(), c.categories.end()) &&
                  std::adjacent_find(c.categories.begin(), c.categories.end()) == c.categories.end(),
              ErrorCategory::invalid_argument,
              "stats: categories of '" + c.name + "' must be sorted and distinct");
      require(std::binary_search(c.categories.begin(), c.categories.end(),
                                 std::string(kMissingCategory)),
              ErrorCategory::invalid_argument,
              "stats: column '" + c.name + "' lacks the missing placeholder");
    }
  }
  require(std::is_sorted(labels_.begin(), labels_.end()) &&
              std::adjacent_find(labels_.begin(), labels_.end()) == labels_.end(),
          ErrorCategory::invalid_argument, "stats: label codebook must be sorted and distinct");
}

std::int32_t PreprocessStats::encode_label(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    fail(ErrorCategory::unknown_label, "label '" + std::string(label) + "' not in codebook");
  }
  return static_cast<std::int32_t>(it - labels_.begin());
}

const std::string& PreprocessStats::decode_label(std::int32_t code) const {
  require(code >= 0 && static_cast<std::size_t>(code) < labels_.size(),
          ErrorCategory::invalid_argument, "class code " + std::to_string(code) + " out of range");
  return labels_[static_cast<std::size_t>(code)];
}

std::int32_t PreprocessStats::category_code(std::size_t j, std::string_view value) const {
  const auto& cats = column(j).categories;
  auto it = std::lower_bound(cats.begin(), cats.end(), value);
  if (it == cats.end() || *it != value) return missing_code(j);
  return static_cast<std::int32_t>(it - cats.begin());
}

std::int32_t PreprocessStats::missing_code(std::size_t j) const {
  const auto& cats = column(j).categories;
  auto it = std::lower_bound(cats.begin(), cats.end(), kMissingCategory);
  return static_cast<std::int32_t>(it - cats.begin());
}

std::vector<std::string> PreprocessStats::feature_names() const {
  std::vector<std::string> names;
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

std::vector<ColumnKind> PreprocessStats::feature_kinds() const {
  std::vector<ColumnKind> kinds;
  for (const auto& c : columns_) kinds.push_back(c.kind);
  return kinds;
}

void to_json(nlohmann::json& j, const PreprocessStats& s) {
  auto cols = nlohmann::json::array();
  for (const auto& c : s.columns()) {
    nlohmann::json col = {{"name", c.name}, {"kind", kind_name(c.kind)}};
    if (c.kind == ColumnKind::numeric) {
      col["mean"] = c.mean;
      col["min"] = c.min;
      col["max"] = c.max;
    } else {
      col["categories"] = c.categories;
    }
    cols.push_back(std::move(col));
  }
  j = {{"format", "advids.preprocess_stats"},
       {"version", 1},
       {"schema", s.schema()},
       {"n_rows_fitted", s.n_rows_fitted()},
       {"columns", std::move(cols)},
       {"labels", std::vector<std::string>(s.labels().begin(), s.labels().end())}};
}

void from_json(const nlohmann::json& j, PreprocessStats& s) {
  require(j.value("format", "") == "advids.preprocess_stats" && j.value("version", 0) == 1,
          ErrorCategory::invalid_argument, "not an advids preprocess stats document (v1)");
  std::vector<ColumnStats> cols;
  for (const auto& c : j.at("columns")) {
    ColumnStats cs;
    cs.name = c.at("name").get<std::string>();
    cs.kind = parse_kind(c.at("kind").get<std::string>());
    if (cs.kind == ColumnKind::numeric) {
      cs.mean = c.at("mean").get<double>();
      cs.min = c.at("min").get<double>();
      cs.max = c.at("max").get<double>();
    } else {
      cs.categories = c.at("categories").get<std::vector<std::string>>();
    }
    cols.push_back(std::move(cs));
  }
  s = PreprocessStats(j.at("schema").get<FlowSchema>(), std::move(cols),
                      j.at("labels").get<std::vector<std::string>>(),
                      j.at("n_rows_fitted").get<std::size_t>());
}

// --- fitting ----------------------------------------------------------------

StatsAccumulator::StatsAccumulator(FlowSchema schema)
    : schema_(std::move(schema)),
      numeric_(schema_.n_features()),
      categories_(schema_.n_features()) {
  schema_.validate();
}

void StatsAccumulator::add(const FlowTable& chunk) {
  require(chunk.schema() == schema_, ErrorCategory::schema_mismatch,
          "stats: chunk schema differs from accumulator schema");
  for (std::size_t j = 0; j < schema_.n_features(); ++j) {
    if (schema_.feature_columns[j].kind == ColumnKind::numeric) {
      NumericAcc& acc = numeric_[j];
      for (double v : chunk.numeric_values(j)) {
        if (std::isnan(v)) continue;
        if (acc.count == 0) {
          acc.min = acc.max = v;
        } else {
          acc.min = std::min(acc.min, v);
          acc.max = std::max(acc.max, v);
        }
        acc.sum += v;
        ++acc.count;
      }
    } else {
      // Dictionary entries only exist for values that occur in the chunk.
      for (const auto& v : chunk.category_dictionary(j)) categories_[j].insert(v);
    }
  }
  for (const auto& l : chunk.label_dictionary()) labels_.insert(l);
  n_rows_ += chunk.n_rows();
}

PreprocessStats StatsAccumulator::finish() const {
  require(n_rows_ > 0, ErrorCategory::empty_input, "cannot fit preprocessing stats on zero rows");
  std::vector<ColumnStats> cols;
  for (std::size_t j = 0; j < schema_.n_features(); ++j) {
    ColumnStats c;
    c.name = schema_.feature_columns[j].name;
    c.kind = schema_.feature_columns[j].kind;
    if (c.kind == ColumnKind::numeric) {
      const NumericAcc& acc = numeric_[j];
      if (acc.count > 0) {
        c.min = acc.min;
        c.max = acc.max;
        // Rounding in the running sum can push the mean a hair outside the range.
        c.mean = std::clamp(acc.sum / static_cast<double>(acc.count), acc.min, acc.max);
      }
    } else {
      std::set<std::string> cats = categories_[j];
      cats.emplace(kMissingCategory);
      c.categories.assign(cats.begin(), cats.end());
    }
    cols.push_back(std::move(c));
  }
  return PreprocessStats(schema_, std::move(cols), {labels_.begin(), labels_.end()}, n_rows_);
}

PreprocessStats fit_stats(const FlowTable& table) {
  StatsAccumulator acc(table.schema());
  acc.add(table);
  return acc.finish();
}

// --- FeatureMatrix -----------------------------------------------------------

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::vector<std::string> names,
                             std::vector<ColumnKind> kinds)
    : n_rows_(n_rows), names_(std::move(names)), kinds_(std::move(kinds)) {
  require(names_.size() == kinds_.size(), ErrorCategory::invalid_argument,
          "feature matrix: names and kinds differ in length");
  data_.assign(n_rows_ * names_.size(), 0.0);
}

void FeatureMatrix::append(const FeatureMatrix& other) {
  require(other.names_ == names_ && other.kinds_ == kinds_, ErrorCategory::invalid_argument,
          "feature matrix: cannot append rows with different columns");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  n_rows_ += other.n_rows_;
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> rows) const {
  FeatureMatrix out(rows.size(), names_, kinds_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] < n_rows_, ErrorCategory::invalid_argument, "row index out of range");
    std::copy_n(data_.data() + rows[i] * n_cols(), n_cols(), out.data_.data() + i * n_cols());
  }
  return out;
}

bool bit_equal(const FeatureMatrix& a, const FeatureMatrix& b) {
  return a.n_rows_ == b.n_rows_ && a.names_ == b.names_ && a.kinds_ == b.kinds_ &&
         (a.data_.empty() ||
          std::memcmp(a.data_.data(), b.data_.data(), a.data_.size() * sizeof(double)) == 0);
}

LabelVector select_labels(const LabelVector& y, std::span<const std::size_t> rows) {
  LabelVector out;
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    require(r < y.size(), ErrorCategory::invalid_argument, "row index out of range");
    out.push_back(y[r]);
  }
  return out;
}

// --- transform ---------------------------------------------------------------

namespace {

Dataset allocate(const FlowTable& table, const PreprocessStats& stats) {
  require(table.schema() == stats.schema(), ErrorCategory::schema_mismatch,
          "transform: table schema does not match fitted stats");
  return {FeatureMatrix(table.n_rows(), stats.feature_names(), stats.feature_kinds()),
          LabelVector(table.n_rows())};
}

}  // namespace

Dataset transform(const FlowTable& table, const PreprocessStats& stats) {
  Dataset out = allocate(table, stats);
  const auto plan = kernels::make_transform_plan(table, stats);
  kernels::serial::transform_rows(plan, 0, table.n_rows(), out.X.values(), out.y);
  return out;
}

Dataset transform_parallel(const FlowTable& table, const PreprocessStats& stats,
                           std::size_t chunk_rows, std::size_t workers) {
  require(chunk_rows >= 1, ErrorCategory::invalid_argument, "chunk_rows must be >= 1");
  require(workers >= 1, ErrorCategory::invalid_argument, "workers must be >= 1");
  Dataset out = allocate(table, stats);
  const auto plan = kernels::make_transform_plan(table, stats);
  kernels::omp::transform_rows(plan, chunk_rows, workers, out.X.values(), out.y);
  return out;
}

// --- split -------------------------------------------------------------------

namespace {

void check_fraction(double f) {
  require(f > 0.0 && f < 1.0, ErrorCategory::invalid_argument,
          "train fraction must lie strictly between 0 and 1");
}

std::size_t train_count(std::size_t n, double f) {
  return static_cast<std::size_t>(std::floor(f * static_cast<double>(n)));
}

}  // namespace

void to_json(nlohmann::json& j, const SplitIndices& s) {
  j = {{"seed", s.seed},
       {"train_fraction", s.train_fraction},
       {"stratified", s.stratified},
       {"n_train", s.train.size()},
       {"n_test", s.test.size()},
       {"train", s.train},
       {"test", s.test}};
}

SplitIndices split(std::size_t n_rows, double train_fraction, std::uint64_t seed) {
  check_fraction(train_fraction);
  require(n_rows >= 2, ErrorCategory::invalid_argument, "split needs at least two rows");
  std::vector<std::size_t> order(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t n_train = train_count(n_rows, train_fraction);
  SplitIndices s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  s.seed = seed;
  s.train_fraction = train_fraction;
  return s;
}

SplitIndices stratified_split(std::span<const std::int32_t> labels, double train_fraction,
                              std::uint64_t seed) {
  check_fraction(train_fraction);
  const std::size_t n = labels.size();
  require(n >= 2, ErrorCategory::invalid_argument, "split needs at least two rows");

  std::map<std::int32_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);

  // Largest-remainder allocation keeps the total at floor(f * n).
  struct Quota {
    std::size_t base;
    double remainder;
  };
  std::vector<Quota> quota;
  std::size_t assigned = 0;
  for (const auto& [cls, rows] : by_class) {
    const double exact = train_fraction * static_cast<double>(rows.size());
    const auto base = static_cast<std::size_t>(std::floor(exact));
    quota.push_back({base, exact - static_cast<double>(base)});
    assigned += base;
  }
  const std::size_t target = train_count(n, train_fraction);
  std::vector<std::size_t> order(quota.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return quota[a].remainder > quota[b].remainder; });
  for (std::size_t k = 0; assigned < target && k < order.size(); ++k, ++assigned) {
    ++quota[order[k]].base;
  }

  Rng rng(seed);
  SplitIndices s;
  std::size_t c = 0;
  for (auto& [cls, rows] : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    const std::size_t take = quota[c++].base;
    s.train.insert(s.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    s.test.insert(s.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  s.seed = seed;
  s.train_fraction = train_fraction;
  s.stratified = true;
  return s;
}

// --- streaming ---------------------------------------------------------------

StreamedPreprocess preprocess_csv_streaming(const std::filesystem::path& path,
                                            const FlowSchema& schema, std::size_t chunk_rows,
                                            std::size_t workers) {
  require(chunk_rows >= 1, ErrorCategory::invalid_argument, "chunk_rows must be >= 1");
  StatsAccumulator acc(schema);
  {
    FlowCsvStream stream(path, schema);
    while (auto chunk = stream.next_chunk(chunk_rows)) acc.add(*chunk);
  }
  StreamedPreprocess out{acc.finish(), {}};
  const std::size_t n = out.stats.n_rows_fitted();
  out.data.X = FeatureMatrix(n, out.stats.feature_names(), out.stats.feature_kinds());
  out.data.y.assign(n, 0);

  FlowCsvStream stream(path, schema);
  std::size_t offset = 0;
  const std::size_t d = out.stats.n_features();
  while (auto chunk = stream.next_chunk(chunk_rows)) {
    const auto plan = kernels::make_transform_plan(*chunk, out.stats);
    const std::size_t m = chunk->n_rows();
    require(offset + m <= n, ErrorCategory::io, path.string() + " changed between passes");
    const std::size_t inner = std::max<std::size_t>(1, (m + workers - 1) / workers);
    kernels::omp::transform_rows(plan, inner, workers,
                                 out.data.X.values().subspan(offset * d, m * d),
                                 std::span<std::int32_t>(out.data.y).subspan(offset, m));
    offset += m;
  }
  require(offset == n, ErrorCategory::io, path.string() + " changed between passes");
  return out;
}

}  // namespace advids
