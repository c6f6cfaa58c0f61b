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

#include "advids/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "advids/csv.hpp"
#include "advids/error.hpp"

namespace advids {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < n_classes; ++j) s += at(truth, j);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n_classes; ++i) s += at(i, pred);
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n_classes; ++i) s += at(i, i);
  return s;
}

ConfusionMatrix confusion(const LabelVector& y_true, const LabelVector& y_pred, std::size_t n_classes,
                          std::vector<std::string> class_names) {
  require(y_true.size() == y_pred.size(), ErrorCategory::invalid_argument,
          "confusion: label vectors differ in length");
  require(n_classes >= 1, ErrorCategory::invalid_argument, "confusion: need at least one class");
  if (class_names.empty()) {
    for (std::size_t k = 0; k < n_classes; ++k) class_names.push_back(std::to_string(k));
  }
  require(class_names.size() == n_classes, ErrorCategory::invalid_argument,
          "confusion: class name count differs from n_classes");
  ConfusionMatrix cm{n_classes, std::vector<std::uint64_t>(n_classes * n_classes, 0),
                     std::move(class_names)};
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto t = y_true[i];
    const auto p = y_pred[i];
    require(t >= 0 && p >= 0 && static_cast<std::size_t>(t) < n_classes &&
                static_cast<std::size_t>(p) < n_classes,
            ErrorCategory::invalid_argument, "confusion: label outside [0, n_classes)");
    ++cm.counts[static_cast<std::size_t>(t) * n_classes + static_cast<std::size_t>(p)];
  }
  return cm;
}

ClassReport report(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  require(total > 0, ErrorCategory::empty_input, "report: confusion matrix is empty");
  ClassReport r;
  r.class_names = cm.class_names;
  r.total_support = total;
  for (std::size_t k = 0; k < cm.n_classes; ++k) {
    ClassScores s;
    const double tp = static_cast<double>(cm.at(k, k));
    const std::uint64_t predicted = cm.col_sum(k);
    s.support = cm.row_sum(k);
    s.precision_undefined = predicted == 0;
    s.recall_undefined = s.support == 0;
    s.precision = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    s.recall = s.support == 0 ? 0.0 : tp / static_cast<double>(s.support);
    const double denom = s.precision + s.recall;
    s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
    r.per_class.push_back(s);
  }
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  const double k = static_cast<double>(cm.n_classes);
  for (const auto& s : r.per_class) {
    r.macro.precision += s.precision / k;
    r.macro.recall += s.recall / k;
    r.macro.f1 += s.f1 / k;
    const double w = static_cast<double>(s.support) / static_cast<double>(total);
    r.weighted.precision += w * s.precision;
    r.weighted.recall += w * s.recall;
    r.weighted.f1 += w * s.f1;
  }
  return r;
}

namespace {

std::size_t class_count(const LabelVector& a, const LabelVector& b) {
  require(!a.empty(), ErrorCategory::invalid_argument, "metrics of empty label vectors");
  require(a.size() == b.size(), ErrorCategory::invalid_argument, "label vectors differ in length");
  const auto m = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
  return static_cast<std::size_t>(m) + 1;
}

}  // namespace

double accuracy(const LabelVector& y_true, const LabelVector& y_pred) {
  class_count(y_true, y_pred);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double f1_weighted(const LabelVector& y_true, const LabelVector& y_pred) {
  return report(confusion(y_true, y_pred, class_count(y_true, y_pred))).weighted.f1;
}

void to_json(nlohmann::json& j, const ConfusionMatrix& cm) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < cm.n_classes; ++i) {
    rows.push_back(std::vector<std::uint64_t>(cm.counts.begin() + static_cast<std::ptrdiff_t>(i * cm.n_classes),
                                              cm.counts.begin() + static_cast<std::ptrdiff_t>((i + 1) * cm.n_classes)));
  }
  j = {{"class_names", cm.class_names}, {"counts", std::move(rows)}};
}

void to_json(nlohmann::json& j, const ClassReport& r) {
  auto classes = nlohmann::json::array();
  for (std::size_t k = 0; k < r.per_class.size(); ++k) {
    const auto& s = r.per_class[k];
    classes.push_back({{"class", r.class_names[k]},
                       {"precision", s.precision},
                       {"recall", s.recall},
                       {"f1", s.f1},
                       {"support", s.support},
                       {"precision_undefined", s.precision_undefined},
                       {"recall_undefined", s.recall_undefined}});
  }
  auto avg = [](const Averages& a) {
    return nlohmann::json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
  };
  j = {{"classes", std::move(classes)},
       {"accuracy", r.accuracy},
       {"macro_avg", avg(r.macro)},
       {"weighted_avg", avg(r.weighted)},
       {"total_support", r.total_support}};
}

std::string format_report(const ClassReport& r) {
  std::size_t name_width = std::string("Weighted avg").size();
  for (const auto& n : r.class_names) name_width = std::max(name_width, n.size());
  const int w = static_cast<int>(name_width);
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %9s %9s %9s %9s\n", w, "Class", "Precision", "Recall",
                "F1-score", "Support");
  out << line;
  for (std::size_t k = 0; k < r.per_class.size(); ++k) {
    const auto& s = r.per_class[k];
    std::snprintf(line, sizeof line, "%-*s %9.2f %9.2f %9.2f %9llu\n", w, r.class_names[k].c_str(),
                  s.precision, s.recall, s.f1, static_cast<unsigned long long>(s.support));
    out << line;
  }
  out << '\n';
  std::snprintf(line, sizeof line, "%-*s %9s %9s %9.2f %9llu\n", w, "Accuracy", "", "", r.accuracy,
                static_cast<unsigned long long>(r.total_support));
  out << line;
  for (const auto& [name, a] : {std::pair{"Macro avg", r.macro}, std::pair{"Weighted avg", r.weighted}}) {
    std::snprintf(line, sizeof line, "%-*s %9.2f %9.2f %9.2f %9llu\n", w, name, a.precision,
                  a.recall, a.f1, static_cast<unsigned long long>(r.total_support));
    out << line;
  }
  return out.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::ostringstream out;
  std::vector<std::string> header{""};
  header.insert(header.end(), cm.class_names.begin(), cm.class_names.end());
  csv::write_record(out, header);
  for (std::size_t i = 0; i < cm.n_classes; ++i) {
    std::vector<std::string> row{cm.class_names[i]};
    for (std::size_t j = 0; j < cm.n_classes; ++j) row.push_back(std::to_string(cm.at(i, j)));
    csv::write_record(out, row);
  }
  return out.str();
}

}  // namespace advids
