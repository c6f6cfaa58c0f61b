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
#include <vector>

#include "advids/attack.hpp"
#include "advids/flowdata.hpp"
#include "advids/gbdt.hpp"
#include "advids/metrics.hpp"
#include "advids/preprocess.hpp"
#include "advids/surrogate.hpp"
#include "json.hpp"

namespace advids {

enum class Provenance : std::uint8_t { clean, adversarial };

struct CombinedTrainSet {
  FeatureMatrix X;
  LabelVector y;
  std::vector<Provenance> provenance;
  double source_epsilon = 0.0;

  std::size_t n_clean() const;
  std::size_t n_adversarial() const;
};

/// Clean block followed by the adversarial block, both in their given order.
CombinedTrainSet augment(const FeatureMatrix& X_train, const LabelVector& y_train,
                         const FeatureMatrix& X_adv, const LabelVector& y_adv,
                         double source_epsilon = 0.0);

/// Accuracy, weighted F1 and the full report of one model on one set.
struct ModelEval {
  double accuracy = 0.0;
  double f1 = 0.0;
  ConfusionMatrix confusion;
  ClassReport report;
};

ModelEval evaluate_labels(const LabelVector& y_true, const LabelVector& y_pred,
                          std::span<const std::string> class_names);
ModelEval evaluate(const Ensemble& model, const Dataset& data, std::span<const std::string> class_names);

void to_json(nlohmann::json& j, const ModelEval& e);

struct PipelineOptions {
  double train_fraction = 0.7;
  bool stratified = false;
  /// Fit imputation/scaling on the train rows only instead of the full table.
  bool fit_on_train_only = false;
  /// Fraction of clean train rows that receive an adversarial copy.
  double attack_fraction = 1.0;
  std::size_t chunk_rows = 65536;
  std::size_t workers = 1;
};

struct PreparedData {
  PreprocessStats stats;
  SplitIndices split;
  Dataset train;
  Dataset test;
};

/// Split, fit and transform: the preprocessing half of the pipeline.
PreparedData prepare_data(const FlowTable& table, const PipelineOptions& options,
                          std::uint64_t split_seed);

struct PipelineResult {
  PreprocessStats stats;
  SplitIndices split;
  Dataset train;
  Dataset test;
  Dataset adv_train;
  Dataset adv_test;

  SurrogateParams surrogate;
  SurrogateTrainLog surrogate_log;
  double surrogate_clean_accuracy = 0.0;
  double surrogate_adv_accuracy = 0.0;

  Ensemble baseline;
  TrainLog baseline_log;
  Ensemble robust;
  TrainLog robust_log;

  ModelEval baseline_clean;
  ModelEval baseline_adv;
  ModelEval robust_clean;
  ModelEval robust_adv;
};

/// Preprocess, split, train the baseline and the surrogate on clean train
/// rows, FGSM the train rows, retrain on the combined set with the same
/// hyperparameters, and score both boosters on the clean test rows and on
/// one FGSM copy of them generated from the clean surrogate.
PipelineResult adversarial_training_pipeline(const FlowTable& table, const Hyperparams& hp,
                                             const SurrogateTrainCfg& scfg, const AttackConfig& acfg,
                                             std::uint64_t split_seed,
                                             const PipelineOptions& options = {});

/// Train-row indices (ascending) that receive an adversarial copy.
std::vector<std::size_t> attacked_rows(std::size_t n_train, double fraction, std::uint64_t seed);

}  // namespace advids
