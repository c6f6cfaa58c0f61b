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

#include "advids/flowdata.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "advids/csv.hpp"
#include "advids/error.hpp"

namespace advids {

std::string_view kind_name(ColumnKind kind) {
  return kind == ColumnKind::numeric ? "numeric" : "categorical";
}

ColumnKind parse_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  fail(ErrorCategory::invalid_spec, "unknown column kind '" + std::string(text) + "'");
}

void FlowSchema::validate() const {
  require(!feature_columns.empty(), ErrorCategory::invalid_spec,
          "schema needs at least one feature column");
  require(!label_column.empty(), ErrorCategory::invalid_spec, "label column name is empty");
  std::unordered_set<std::string_view> seen;
  for (const auto& c : feature_columns) {
    require(!c.name.empty(), ErrorCategory::invalid_spec, "feature column with empty name");
    require(seen.insert(c.name).second, ErrorCategory::invalid_spec,
            "duplicate feature column '" + c.name + "'");
  }
  require(!seen.contains(label_column), ErrorCategory::invalid_spec,
          "label column '" + label_column + "' is also a feature column");
}

void to_json(nlohmann::json& j, const FlowSchema& s) {
  auto cols = nlohmann::json::array();
  for (const auto& c : s.feature_columns) {
    cols.push_back({{"name", c.name}, {"kind", kind_name(c.kind)}});
  }
  j = {{"label_column", s.label_column}, {"features", std::move(cols)}};
}

void from_json(const nlohmann::json& j, FlowSchema& s) {
  s.label_column = j.value("label_column", std::string("Attack"));
  s.feature_columns.clear();
  for (const auto& c : j.at("features")) {
    s.feature_columns.push_back(
        {c.at("name").get<std::string>(), parse_kind(c.at("kind").get<std::string>())});
  }
}

// --- Dictionary / FlowTable ------------------------------------------------

std::int32_t Dictionary::intern(std::string_view value) {
  std::string key(value);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto code = static_cast<std::int32_t>(values_.size());
  values_.push_back(key);
  index_.emplace(std::move(key), code);
  return code;
}

FlowTable::FlowTable(FlowSchema schema) : schema_(std::move(schema)) {
  schema_.validate();
  columns_.reserve(schema_.n_features());
  for (const auto& c : schema_.feature_columns) columns_.push_back(Column{c.kind, {}, {}});
}

void FlowTable::reserve(std::size_t rows) {
  for (auto& c : columns_) {
    if (c.kind == ColumnKind::numeric) {
      c.numeric.reserve(rows);
    } else {
      c.categories.reserve(rows);
    }
  }
  labels_.reserve(rows);
}

void FlowTable::append_row(std::span<const Cell> cells, std::string_view label) {
  require(cells.size() == columns_.size(), ErrorCategory::invalid_argument,
          "row has " + std::to_string(cells.size()) + " cells, schema has " +
              std::to_string(columns_.size()) + " feature columns");
  require(!label.empty(), ErrorCategory::invalid_argument, "empty label text");
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const Cell& cell = cells[j];
    const bool ok = std::holds_alternative<std::monostate>(cell) ||
                    (columns_[j].kind == ColumnKind::numeric) == std::holds_alternative<double>(cell);
    require(ok, ErrorCategory::invalid_argument,
            "cell kind does not match column '" + schema_.feature_columns[j].name + "'");
  }
  for (std::size_t j = 0; j < cells.size(); ++j) {
    Column& col = columns_[j];
    const Cell& cell = cells[j];
    if (col.kind == ColumnKind::numeric) {
      const double* v = std::get_if<double>(&cell);
      col.numeric.push_back(v && std::isfinite(*v) ? *v : std::numeric_limits<double>::quiet_NaN());
    } else {
      const std::string* s = std::get_if<std::string>(&cell);
      col.categories.push(s && !s->empty() ? col.categories.intern(*s) : Dictionary::kMissing);
    }
  }
  labels_.push(labels_.intern(label));
}

const FlowTable::Column& FlowTable::column(std::size_t col) const {
  require(col < columns_.size(), ErrorCategory::invalid_argument,
          "column index " + std::to_string(col) + " out of range");
  return columns_[col];
}

Cell FlowTable::cell(std::size_t row, std::size_t col) const {
  const Column& c = column(col);
  if (c.kind == ColumnKind::numeric) {
    const double v = c.numeric.at(row);
    if (std::isnan(v)) return std::monostate{};
    return v;
  }
  const std::int32_t code = c.categories.codes()[row];
  if (code == Dictionary::kMissing) return std::monostate{};
  return c.categories.values()[static_cast<std::size_t>(code)];
}

bool FlowTable::is_missing(std::size_t row, std::size_t col) const {
  const Column& c = column(col);
  if (c.kind == ColumnKind::numeric) return std::isnan(c.numeric.at(row));
  return c.categories.codes()[row] == Dictionary::kMissing;
}

std::string_view FlowTable::label(std::size_t row) const {
  return labels_.values()[static_cast<std::size_t>(labels_.codes()[row])];
}

std::span<const double> FlowTable::numeric_values(std::size_t col) const {
  const Column& c = column(col);
  require(c.kind == ColumnKind::numeric, ErrorCategory::invalid_argument, "column is not numeric");
  return c.numeric;
}

std::span<const std::int32_t> FlowTable::category_codes(std::size_t col) const {
  const Column& c = column(col);
  require(c.kind == ColumnKind::categorical, ErrorCategory::invalid_argument,
          "column is not categorical");
  return c.categories.codes();
}

std::span<const std::string> FlowTable::category_dictionary(std::size_t col) const {
  const Column& c = column(col);
  require(c.kind == ColumnKind::categorical, ErrorCategory::invalid_argument,
          "column is not categorical");
  return c.categories.values();
}

FlowTable FlowTable::select(std::span<const std::size_t> rows) const {
  FlowTable out(schema_);
  out.reserve(rows.size());
  std::vector<Cell> cells(columns_.size());
  for (std::size_t r : rows) {
    require(r < n_rows(), ErrorCategory::invalid_argument, "row index out of range");
    for (std::size_t j = 0; j < columns_.size(); ++j) cells[j] = cell(r, j);
    out.append_row(cells, label(r));
  }
  return out;
}

bool operator==(const FlowTable& a, const FlowTable& b) {
  if (a.schema_ != b.schema_ || a.n_rows() != b.n_rows()) return false;
  for (std::size_t j = 0; j < a.columns_.size(); ++j) {
    const auto& ca = a.columns_[j];
    const auto& cb = b.columns_[j];
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      if (ca.kind == ColumnKind::numeric) {
        const double x = ca.numeric[i];
        const double y = cb.numeric[i];
        if (std::isnan(x) != std::isnan(y)) return false;
        if (!std::isnan(x) && (x != y || std::signbit(x) != std::signbit(y))) return false;
      } else if (a.cell(i, j) != b.cell(i, j)) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    if (a.label(i) != b.label(i)) return false;
  }
  return true;
}

// --- CSV ------------------------------------------------------------------

FlowCsvStream::FlowCsvStream(const std::filesystem::path& path, FlowSchema schema)
    : path_(path), file_(path), schema_(std::move(schema)) {
  schema_.validate();
  require(static_cast<bool>(file_), ErrorCategory::io, "cannot open " + path.string());
  if (!read_record()) {
    fail(ErrorCategory::empty_input, path.string() + ": empty file (no header row)");
  }
  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < fields_.size(); ++i) header.emplace(fields_[i], i);
  auto locate = [&](const std::string& name) {
    auto it = header.find(name);
    if (it == header.end()) {
      fail(ErrorCategory::schema_mismatch,
           path.string() + ": header lacks column '" + name + "'");
    }
    min_fields_ = std::max(min_fields_, it->second + 1);
    return it->second;
  };
  for (const auto& c : schema_.feature_columns) feature_pos_.push_back(locate(c.name));
  label_pos_ = locate(schema_.label_column);
  cells_.resize(schema_.n_features());
}

bool FlowCsvStream::read_record() {
  // Blank lines are skipped.
  for (;;) {
    if (!reader_.next(fields_)) return false;
    if (!(fields_.size() == 1 && fields_[0].empty())) return true;
  }
}

std::optional<FlowTable> FlowCsvStream::next_chunk(std::size_t max_rows) {
  if (done_) return std::nullopt;
  require(max_rows >= 1, ErrorCategory::invalid_argument, "chunk size must be >= 1");
  FlowTable chunk(schema_);
  while (chunk.n_rows() < max_rows) {
    if (!read_record()) {
      done_ = true;
      break;
    }
    if (fields_.size() < min_fields_) {
      fail(ErrorCategory::schema_mismatch,
           path_.string() + ":" + std::to_string(reader_.line()) + ": record has " +
               std::to_string(fields_.size()) + " fields, header needs " +
               std::to_string(min_fields_));
    }
    for (std::size_t j = 0; j < feature_pos_.size(); ++j) {
      std::string& text = fields_[feature_pos_[j]];
      if (text.empty()) {
        cells_[j] = std::monostate{};
      } else if (schema_.feature_columns[j].kind == ColumnKind::numeric) {
        const auto v = csv::parse_double(text);
        cells_[j] = v ? Cell{*v} : Cell{std::monostate{}};
      } else {
        cells_[j] = std::move(text);
      }
    }
    const std::string& label = fields_[label_pos_];
    if (label.empty()) {
      fail(ErrorCategory::invalid_argument,
           path_.string() + ":" + std::to_string(reader_.line()) + ": empty label");
    }
    chunk.append_row(cells_, label);
  }
  if (chunk.n_rows() == 0 && done_) return std::nullopt;
  return chunk;
}

FlowTable load_csv(const std::filesystem::path& path, const FlowSchema& schema) {
  FlowCsvStream stream(path, schema);
  FlowTable table(schema);
  auto chunk = stream.next_chunk(std::numeric_limits<std::size_t>::max());
  if (chunk) table = std::move(*chunk);
  return table;
}

void write_csv_header(const FlowSchema& schema, std::ostream& out) {
  std::vector<std::string> header;
  for (const auto& c : schema.feature_columns) header.push_back(c.name);
  header.push_back(schema.label_column);
  csv::write_record(out, header);
}

void append_csv_rows(const FlowTable& table, std::ostream& out) {
  std::string line;
  std::ostringstream field;
  for (std::size_t i = 0; i < table.n_rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < table.n_features(); ++j) {
      if (j) line.push_back(',');
      const Cell c = table.cell(i, j);
      if (const double* v = std::get_if<double>(&c)) {
        csv::append_double(line, *v);
      } else if (const std::string* s = std::get_if<std::string>(&c)) {
        field.str({});
        csv::write_field(field, *s);
        line += field.str();
      }
    }
    line.push_back(',');
    field.str({});
    csv::write_field(field, table.label(i));
    line += field.str();
    line.push_back('\n');
    out << line;
  }
}

void write_csv(const FlowTable& table, std::ostream& out) {
  write_csv_header(table.schema(), out);
  append_csv_rows(table, out);
}

void write_csv(const FlowTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot open " + path.string() + " for writing");
  write_csv(table, out);
  out.flush();
  require(static_cast<bool>(out), ErrorCategory::io, "write failed: " + path.string());
}

// --- Synthetic data -------------------------------------------------------

namespace {

// Per-class test supports of the reference evaluation, in report order.
constexpr std::array<std::pair<const char*, double>, 10> kReferenceSupport{{
    {"Benign", 1080385},
    {"backdoor", 4878},
    {"ddos", 523977},
    {"dos", 196308},
    {"injection", 198140},
    {"mitm", 2317},
    {"password", 298115},
    {"ransomware", 1007},
    {"scanning", 900651},
    {"xss", 734987},
}};

}  // namespace

std::vector<std::string> default_class_names() {
  std::vector<std::string> names;
  for (const auto& [name, support] : kReferenceSupport) names.emplace_back(name);
  return names;
}

std::vector<double> default_class_priors() {
  double total = 0.0;
  for (const auto& entry : kReferenceSupport) total += entry.second;
  std::vector<double> priors;
  for (const auto& entry : kReferenceSupport) priors.push_back(entry.second / total);
  return priors;
}

void SynthSpec::validate() const {
  require(n_rows > 0, ErrorCategory::invalid_spec, "synth: n_rows must be positive");
  require(n_numeric + n_categorical > 0, ErrorCategory::invalid_spec,
          "synth: need at least one feature");
  require(!class_names.empty(), ErrorCategory::invalid_spec, "synth: no class names");
  require(class_priors.size() == class_names.size(), ErrorCategory::invalid_spec,
          "synth: class_priors length differs from class_names length");
  double sum = 0.0;
  for (double p : class_priors) {
    require(p >= 0.0 && std::isfinite(p), ErrorCategory::invalid_spec,
            "synth: class priors must be finite and nonnegative");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-9, ErrorCategory::invalid_spec,
          "synth: class priors must sum to 1");
  std::unordered_set<std::string_view> names;
  for (const auto& n : class_names) {
    require(!n.empty() && names.insert(n).second, ErrorCategory::invalid_spec,
            "synth: class names must be nonempty and distinct");
  }
  require(missing_rate >= 0.0 && missing_rate < 1.0, ErrorCategory::invalid_spec,
          "synth: missing_rate must lie in [0, 1)");
  require(separation > 0.0 && std::isfinite(separation), ErrorCategory::invalid_spec,
          "synth: separation must be positive");
  require(n_categorical == 0 || n_categories >= 1, ErrorCategory::invalid_spec,
          "synth: n_categories must be >= 1");
}

FlowSchema SynthSpec::schema() const {
  FlowSchema s;
  for (std::size_t j = 0; j < n_numeric + n_categorical; ++j) {
    s.feature_columns.push_back(
        {"f" + std::to_string(j), j < n_numeric ? ColumnKind::numeric : ColumnKind::categorical});
  }
  return s;
}

void to_json(nlohmann::json& j, const SynthSpec& s) {
  j = {{"n_rows", s.n_rows},
       {"n_numeric", s.n_numeric},
       {"n_categorical", s.n_categorical},
       {"class_names", s.class_names},
       {"class_priors", s.class_priors},
       {"missing_rate", s.missing_rate},
       {"separation", s.separation},
       {"n_categories", s.n_categories},
       {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SynthSpec& s) {
  SynthSpec d;
  s.n_rows = j.at("n_rows").get<std::size_t>();
  s.n_numeric = j.value("n_numeric", d.n_numeric);
  s.n_categorical = j.value("n_categorical", d.n_categorical);
  s.class_names = j.value("class_names", d.class_names);
  if (j.contains("class_priors")) {
    s.class_priors = j.at("class_priors").get<std::vector<double>>();
  } else if (j.contains("class_names")) {
    s.class_priors.assign(s.class_names.size(), 1.0 / static_cast<double>(s.class_names.size()));
  } else {
    s.class_priors = d.class_priors;
  }
  s.missing_rate = j.value("missing_rate", d.missing_rate);
  s.separation = j.value("separation", d.separation);
  s.n_categories = j.value("n_categories", d.n_categories);
  s.seed = j.at("seed").get<std::uint64_t>();
}

namespace {
constexpr double kPreferredCategoryMass = 0.6;
constexpr std::uint64_t kParamStream = 0x9e3779b97f4a7c15ULL;
}  // namespace

SynthGenerator::SynthGenerator(SynthSpec spec)
    : spec_(std::move(spec)), schema_(spec_.schema()), rng_(spec_.seed) {
  spec_.validate();
  std::partial_sum(spec_.class_priors.begin(), spec_.class_priors.end(),
                   std::back_inserter(cumulative_priors_));

  // Cluster parameters come from a separate stream so the row stream does
  // not depend on the table width.
  Rng params(spec_.seed ^ kParamStream);
  const std::size_t k = spec_.class_names.size();
  centers_.resize(k * spec_.n_numeric);
  for (double& c : centers_) c = spec_.separation * params.normal();
  preferred_.resize(k * spec_.n_categorical);
  for (auto& p : preferred_) p = static_cast<std::int32_t>(params.below(spec_.n_categories));
  for (std::size_t a = 0; a < spec_.n_categories; ++a) alphabet_.push_back("c" + std::to_string(a));
}

FlowTable SynthGenerator::next_chunk(std::size_t max_rows) {
  FlowTable chunk(schema_);
  const std::size_t n = std::min(max_rows, spec_.n_rows - emitted_);
  chunk.reserve(n);
  std::vector<Cell> cells(schema_.n_features());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cls = rng_.categorical(cumulative_priors_);
    for (std::size_t j = 0; j < spec_.n_numeric; ++j) {
      cells[j] = centers_[cls * spec_.n_numeric + j] + rng_.normal();
    }
    for (std::size_t j = 0; j < spec_.n_categorical; ++j) {
      std::size_t a;
      if (rng_.uniform() < kPreferredCategoryMass) {
        a = static_cast<std::size_t>(preferred_[cls * spec_.n_categorical + j]);
      } else {
        a = static_cast<std::size_t>(rng_.below(spec_.n_categories));
      }
      cells[spec_.n_numeric + j] = alphabet_[a];
    }
    for (auto& c : cells) {
      if (rng_.uniform() < spec_.missing_rate) c = std::monostate{};
    }
    chunk.append_row(cells, spec_.class_names[cls]);
  }
  emitted_ += n;
  return chunk;
}

FlowTable synth_generate(const SynthSpec& spec) {
  SynthGenerator gen(spec);
  return gen.next_chunk(spec.n_rows);
}

}  // namespace advids
