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
#include <string>
#include <vector>

#include "advids/preprocess.hpp"
#include "json.hpp"

namespace advids {

/// counts[i][j] = rows of true class i predicted as class j.
struct ConfusionMatrix {
  std::size_t n_classes = 0;
  std::vector<std::uint64_t> counts;  // row-major K x K
  std::vector<std::string> class_names;

  std::uint64_t at(std::size_t truth, std::size_t pred) const {
    return counts[truth * n_classes + pred];
  }
  std::uint64_t total() const;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t pred) const;
  std::uint64_t trace() const;
};

/// Class names default to "0".."K-1" when none are given.
ConfusionMatrix confusion(const LabelVector& y_true, const LabelVector& y_pred, std::size_t n_classes,
                          std::vector<std::string> class_names = {});

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  // Set when the corresponding ratio had a zero denominator and was reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassReport {
  std::vector<std::string> class_names;
  std::vector<ClassScores> per_class;
  double accuracy = 0.0;
  Averages macro;
  Averages weighted;
  std::uint64_t total_support = 0;
};

ClassReport report(const ConfusionMatrix& cm);

double accuracy(const LabelVector& y_true, const LabelVector& y_pred);
/// Support-weighted F1 over the classes present in either vector.
double f1_weighted(const LabelVector& y_true, const LabelVector& y_pred);

void to_json(nlohmann::json& j, const ConfusionMatrix& cm);
void to_json(nlohmann::json& j, const ClassReport& r);

/// Fixed-width classification report: one row per class in codebook order,
/// then the accuracy, macro and weighted rows. Scores use two decimals.
std::string format_report(const ClassReport& r);

/// CSV with a class-name header row and one labelled row per true class.
std::string confusion_csv(const ConfusionMatrix& cm);

}  // namespace advids
