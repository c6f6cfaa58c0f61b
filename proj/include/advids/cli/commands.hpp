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
#include <string>
#include <vector>

#include "advids/cli/run_config.hpp"

namespace advids::cli {

struct Context {
  RunConfig cfg;
  std::filesystem::path out_dir;
};

struct TrainArgs {
  /// Adversarial feature CSV to append to the clean train rows. When set the
  /// command trains the robust booster only.
  std::optional<std::filesystem::path> adversarial;
};

struct AttackArgs {
  std::filesystem::path input = "test.csv";  // relative to the output directory
  std::optional<std::string> output;          // stem; defaults to adv_<input stem>
  std::optional<double> epsilon;
};

struct EvalArgs {
  std::vector<std::string> models;  // defaults to whichever of baseline, robust exist
  std::vector<std::string> sets;    // defaults to whichever of test, adv_test exist
};

void cmd_synth(const Context& ctx);
void cmd_preprocess(const Context& ctx);
void cmd_train(const Context& ctx, const TrainArgs& args);
void cmd_attack(const Context& ctx, const AttackArgs& args);
void cmd_advtrain(const Context& ctx);
void cmd_eval(const Context& ctx, const EvalArgs& args);
void cmd_sweep(const Context& ctx);

/// Parses argv, runs one subcommand and returns the process exit code.
/// Failures print a single "error category=<name> message=<json string>"
/// line to stderr.
int run(int argc, char** argv);

}  // namespace advids::cli
