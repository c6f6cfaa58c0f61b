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

#include "advids/feature_io.hpp"

#include <charconv>
#include <fstream>

#include "advids/csv.hpp"
#include "advids/error.hpp"

namespace advids {

void write_features(const Dataset& data, std::ostream& out) {
  const auto& X = data.X;
  require(X.n_rows() == data.y.size(), ErrorCategory::invalid_argument,
          "write_features: row count differs from label count");
  std::vector<std::string> header(X.names().begin(), X.names().end());
  header.emplace_back("label");
  csv::write_record(out, header);
  std::string line;
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    line.clear();
    for (double v : X.row(i)) {
      csv::append_double(line, v);
      line.push_back(',');
    }
    line += std::to_string(data.y[i]);
    line.push_back('\n');
    out << line;
  }
}

void write_features(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot open " + path.string() + " for writing");
  write_features(data, out);
  out.flush();
  require(static_cast<bool>(out), ErrorCategory::io, "write failed: " + path.string());
}

Dataset read_features(const std::filesystem::path& path, const PreprocessStats& stats) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot open " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> fields;
  require(reader.next(fields), ErrorCategory::empty_input, path.string() + ": no header");
  const auto names = stats.feature_names();
  const std::size_t d = names.size();
  require(fields.size() == d + 1 && fields.back() == "label", ErrorCategory::schema_mismatch,
          path.string() + ": expected " + std::to_string(d) + " feature columns and a label column");
  for (std::size_t j = 0; j < d; ++j) {
    require(fields[j] == names[j], ErrorCategory::schema_mismatch,
            path.string() + ": column " + std::to_string(j) + " is '" + fields[j] + "', expected '" +
                names[j] + "'");
  }

  std::vector<double> values;
  LabelVector y;
  const auto k = static_cast<std::int32_t>(stats.n_classes());
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    const auto where = path.string() + ":" + std::to_string(reader.line());
    require(fields.size() == d + 1, ErrorCategory::schema_mismatch, where + ": wrong field count");
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = csv::parse_double(fields[j]);
      require(v.has_value(), ErrorCategory::invalid_argument, where + ": bad number '" + fields[j] + "'");
      values.push_back(*v);
    }
    std::int32_t code = -1;
    const auto& f = fields[d];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), code);
    require(ec == std::errc{} && ptr == f.data() + f.size() && code >= 0 && code < k,
            ErrorCategory::unknown_label, where + ": label code '" + f + "' outside [0, " +
                                              std::to_string(k) + ")");
    y.push_back(code);
  }

  Dataset out{FeatureMatrix(y.size(), names, stats.feature_kinds()), std::move(y)};
  std::copy(values.begin(), values.end(), out.X.values().begin());
  return out;
}

void to_json(nlohmann::json& j, const AttackSidecar& s) {
  j = {{"attack", s.attack},
       {"source_sha256", s.source_sha256},
       {"surrogate_sha256", s.surrogate_sha256},
       {"output_sha256", s.output_sha256},
       {"n_rows", s.n_rows}};
}

void from_json(const nlohmann::json& j, AttackSidecar& s) {
  j.at("attack").get_to(s.attack);
  j.at("source_sha256").get_to(s.source_sha256);
  j.at("surrogate_sha256").get_to(s.surrogate_sha256);
  j.at("output_sha256").get_to(s.output_sha256);
  j.at("n_rows").get_to(s.n_rows);
}

}  // namespace advids
