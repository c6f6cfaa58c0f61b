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
#include <optional>
#include <string>
#include <vector>

#include "advids/advtrain.hpp"
#include "advids/attack.hpp"
#include "advids/flowdata.hpp"
#include "advids/gbdt.hpp"
#include "advids/surrogate.hpp"
#include "json.hpp"

namespace advids::cli {

/// Everything a command needs, read from one JSON document. Relative paths
/// are resolved against the directory holding the config file.
struct RunConfig {
  std::optional<std::filesystem::path> input_csv;
  std::optional<SynthSpec> synth;
  FlowSchema schema;

  PipelineOptions preprocess;
  std::uint64_t split_seed = 0;

  Hyperparams booster;
  SurrogateTrainCfg surrogate;
  AttackConfig attack;
  /// Apply numeric_only_mask() instead of perturbing every column.
  bool numeric_only = false;

  std::vector<double> sweep_epsilons{0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3};
  std::vector<std::string> report_formats{"json", "text", "csv"};
  std::size_t importance_top = 10;

  /// The document as given, echoed into manifests.
  nlohmann::json source;

  bool wants(std::string_view format) const;
};

/// Validates every field and throws a config error listing all violations.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace advids::cli
