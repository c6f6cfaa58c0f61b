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
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "advids/csv.hpp"
#include "advids/rng.hpp"
#include "json.hpp"

namespace advids {

enum class ColumnKind : std::uint8_t { numeric, categorical };

std::string_view kind_name(ColumnKind kind);
ColumnKind parse_kind(std::string_view text);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;

  bool operator==(const ColumnSpec&) const = default;
};

struct FlowSchema {
  std::vector<ColumnSpec> feature_columns;
  std::string label_column = "Attack";

  /// Throws invalid-spec on duplicate names, no features, or a label
  /// column that collides with a feature column.
  void validate() const;
  std::size_t n_features() const { return feature_columns.size(); }

  bool operator==(const FlowSchema&) const = default;
};

void to_json(nlohmann::json& j, const FlowSchema& s);
void from_json(const nlohmann::json& j, FlowSchema& s);

/// One feature slot: absent, numeric, or category text.
using Cell = std::variant<std::monostate, double, std::string>;

/// Interned strings with per-row codes; -1 marks a missing row.
class Dictionary {
 public:
  static constexpr std::int32_t kMissing = -1;

  std::int32_t intern(std::string_view value);
  void push(std::int32_t code) { codes_.push_back(code); }
  void reserve(std::size_t n) { codes_.reserve(n); }

  std::span<const std::int32_t> codes() const { return codes_; }
  std::span<const std::string> values() const { return values_; }

 private:
  std::vector<std::int32_t> codes_;
  std::vector<std::string> values_;
  std::unordered_map<std::string, std::int32_t> index_;
};

/// Columnar flow-record table. Numeric columns hold doubles with NaN for
/// missing; categorical columns and the label are dictionary encoded in
/// first-appearance order.
class FlowTable {
 public:
  explicit FlowTable(FlowSchema schema);

  const FlowSchema& schema() const { return schema_; }
  std::size_t n_rows() const { return labels_.codes().size(); }
  std::size_t n_features() const { return columns_.size(); }

  void reserve(std::size_t rows);

  /// Appends one record. Cells must match the column kinds (or be absent);
  /// NaN numerics and empty category strings are stored as missing.
  void append_row(std::span<const Cell> cells, std::string_view label);

  Cell cell(std::size_t row, std::size_t col) const;
  bool is_missing(std::size_t row, std::size_t col) const;
  std::string_view label(std::size_t row) const;

  std::span<const double> numeric_values(std::size_t col) const;
  std::span<const std::int32_t> category_codes(std::size_t col) const;
  std::span<const std::string> category_dictionary(std::size_t col) const;
  std::span<const std::int32_t> label_codes() const { return labels_.codes(); }
  std::span<const std::string> label_dictionary() const { return labels_.values(); }

  /// New table holding the given rows in the given order.
  FlowTable select(std::span<const std::size_t> rows) const;

  /// Field-by-field content equality; dictionary order is irrelevant.
  friend bool operator==(const FlowTable& a, const FlowTable& b);

 private:
  struct Column {
    ColumnKind kind;
    std::vector<double> numeric;
    Dictionary categories;
  };

  const Column& column(std::size_t col) const;

  FlowSchema schema_;
  std::vector<Column> columns_;
  Dictionary labels_;
};

/// Reads a flow CSV in bounded chunks. The header is validated on
/// construction; columns outside the schema are ignored.
class FlowCsvStream {
 public:
  FlowCsvStream(const std::filesystem::path& path, FlowSchema schema);

  /// Next chunk of at most `max_rows` rows, or nullopt at end of file.
  std::optional<FlowTable> next_chunk(std::size_t max_rows);

  const FlowSchema& schema() const { return schema_; }

 private:
  std::filesystem::path path_;
  std::ifstream file_;
  csv::Reader reader_{file_};
  FlowSchema schema_;
  std::vector<std::size_t> feature_pos_;
  std::size_t label_pos_ = 0;
  std::size_t min_fields_ = 0;
  std::vector<std::string> fields_;
  std::vector<Cell> cells_;
  bool done_ = false;

  bool read_record();
};

FlowTable load_csv(const std::filesystem::path& path, const FlowSchema& schema);

void write_csv(const FlowTable& table, std::ostream& out);
void write_csv(const FlowTable& table, const std::filesystem::path& path);

/// Writes the CSV header only; used with append_csv_rows for chunked output.
void write_csv_header(const FlowSchema& schema, std::ostream& out);
void append_csv_rows(const FlowTable& table, std::ostream& out);

// ---------------------------------------------------------------------------
// Synthetic data

/// The ten NF-ToN-IoT-v2 traffic classes, in report order.
std::vector<std::string> default_class_names();
/// Class priors proportional to the per-class test supports of the
/// reference evaluation (3,940,765 rows in total).
std::vector<double> default_class_priors();

struct SynthSpec {
  std::size_t n_rows = 0;
  std::size_t n_numeric = 20;
  std::size_t n_categorical = 4;
  std::vector<std::string> class_names = default_class_names();
  std::vector<double> class_priors = default_class_priors();
  double missing_rate = 0.0;
  double separation = 1.0;
  std::size_t n_categories = 6;
  std::uint64_t seed = 0;

  void validate() const;
  /// Features are named f0..f{n-1}: numeric first, then categorical.
  FlowSchema schema() const;
};

void to_json(nlohmann::json& j, const SynthSpec& s);
void from_json(const nlohmann::json& j, SynthSpec& s);

/// Produces the rows of synth_generate(spec) in consecutive chunks, so a
/// large dataset can be written without holding it in memory.
class SynthGenerator {
 public:
  explicit SynthGenerator(SynthSpec spec);

  bool done() const { return emitted_ == spec_.n_rows; }
  FlowTable next_chunk(std::size_t max_rows);
  const FlowSchema& schema() const { return schema_; }

 private:
  SynthSpec spec_;
  FlowSchema schema_;
  std::vector<double> cumulative_priors_;
  std::vector<double> centers_;            // class-major, n_classes x n_numeric
  std::vector<std::int32_t> preferred_;    // class-major, n_classes x n_categorical
  std::vector<std::string> alphabet_;
  Rng rng_;
  std::size_t emitted_ = 0;
};

FlowTable synth_generate(const SynthSpec& spec);

}  // namespace advids
