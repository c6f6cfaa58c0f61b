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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "advids/attack.hpp"
#include "advids/preprocess.hpp"
#include "json.hpp"

namespace advids {

/// Scaled feature matrix as CSV: one column per feature (stats order), then
/// an integer "label" column holding class codes. Doubles round-trip exactly.
void write_features(const Dataset& data, std::ostream& out);
void write_features(const Dataset& data, const std::filesystem::path& path);

/// Reads a feature CSV. The header must match the feature names of `stats`
/// and every label must be a valid class code.
Dataset read_features(const std::filesystem::path& path, const PreprocessStats& stats);

/// Provenance written next to an adversarial feature CSV.
struct AttackSidecar {
  AttackConfig attack;
  std::string source_sha256;     // clean feature CSV the rows were derived from
  std::string surrogate_sha256;  // surrogate parameters that produced the signs
  std::string output_sha256;     // adversarial feature CSV
  std::size_t n_rows = 0;
};

void to_json(nlohmann::json& j, const AttackSidecar& s);
void from_json(const nlohmann::json& j, AttackSidecar& s);

}  // namespace advids
