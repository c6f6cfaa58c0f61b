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

#include "advids/advtrain.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "advids/error.hpp"

namespace advids {

std::size_t CombinedTrainSet::n_clean() const {
  return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), Provenance::clean));
}

std::size_t CombinedTrainSet::n_adversarial() const { return provenance.size() - n_clean(); }

CombinedTrainSet augment(const FeatureMatrix& X_train, const LabelVector& y_train,
                         const FeatureMatrix& X_adv, const LabelVector& y_adv, double source_epsilon) {
  require(X_train.n_rows() == y_train.size(), ErrorCategory::invalid_argument,
          "augment: clean rows and labels differ in count");
  require(X_adv.n_rows() == y_adv.size(), ErrorCategory::invalid_argument,
          "augment: adversarial rows and labels differ in count");
  require(X_adv.n_rows() == 0 || X_adv.n_cols() == X_train.n_cols(), ErrorCategory::invalid_argument,
          "augment: feature dimensionality differs");
  CombinedTrainSet out{X_train, y_train, std::vector<Provenance>(y_train.size(), Provenance::clean),
                       source_epsilon};
  if (X_adv.n_rows() > 0) out.X.append(X_adv);
  out.y.insert(out.y.end(), y_adv.begin(), y_adv.end());
  out.provenance.resize(out.y.size(), Provenance::adversarial);
  return out;
}

ModelEval evaluate_labels(const LabelVector& y_true, const LabelVector& y_pred,
                          std::span<const std::string> class_names) {
  ModelEval e;
  e.confusion = confusion(y_true, y_pred, class_names.size(),
                          std::vector<std::string>(class_names.begin(), class_names.end()));
  e.report = report(e.confusion);
  e.accuracy = e.report.accuracy;
  e.f1 = e.report.weighted.f1;
  return e;
}

ModelEval evaluate(const Ensemble& model, const Dataset& data, std::span<const std::string> class_names) {
  return evaluate_labels(data.y, predict_class(model, data.X), class_names);
}

void to_json(nlohmann::json& j, const ModelEval& e) {
  j = {{"accuracy", e.accuracy}, {"f1_weighted", e.f1}, {"confusion", e.confusion}, {"report", e.report}};
}

std::vector<std::size_t> attacked_rows(std::size_t n_train, double fraction, std::uint64_t seed) {
  require(fraction >= 0.0 && fraction <= 1.0, ErrorCategory::invalid_argument,
          "attack_fraction must lie in [0, 1]");
  std::vector<std::size_t> rows;
  if (fraction == 1.0) {
    rows.resize(n_train);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else if (fraction > 0.0 && n_train >= 2) {
    rows = split(n_train, fraction, seed).train;
    std::sort(rows.begin(), rows.end());
  }
  return rows;
}

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.category(), std::string(name) + ": " + e.what());
  }
}

// Class codes of the table's labels in lexicographic order, matching the
// codebook the fitted stats will use.
std::vector<std::int32_t> lexicographic_label_codes(const FlowTable& table) {
  const auto dict = table.label_dictionary();
  std::vector<std::int32_t> order(dict.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return dict[a] < dict[b]; });
  std::vector<std::int32_t> rank(dict.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<std::int32_t>(r);
  std::vector<std::int32_t> codes(table.n_rows());
  const auto raw = table.label_codes();
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = rank[raw[i]];
  return codes;
}

double accuracy_of(const LabelVector& truth, const LabelVector& pred) {
  return truth.empty() ? 0.0 : accuracy(truth, pred);
}

}  // namespace

PreparedData prepare_data(const FlowTable& table, const PipelineOptions& options,
                          std::uint64_t split_seed) {
  require(table.n_rows() > 0, ErrorCategory::empty_input, "preprocess: table has no rows");
  PreparedData r;
  r.split = stage("split", [&] {
    return options.stratified
               ? stratified_split(lexicographic_label_codes(table), options.train_fraction, split_seed)
               : split(table.n_rows(), options.train_fraction, split_seed);
  });
  r.stats = stage("preprocess", [&] {
    return options.fit_on_train_only ? fit_stats(table.select(r.split.train)) : fit_stats(table);
  });
  stage("preprocess", [&] {
    const Dataset all = transform_parallel(table, r.stats, options.chunk_rows, options.workers);
    r.train = {all.X.select(r.split.train), select_labels(all.y, r.split.train)};
    r.test = {all.X.select(r.split.test), select_labels(all.y, r.split.test)};
    return 0;
  });
  return r;
}

PipelineResult adversarial_training_pipeline(const FlowTable& table, const Hyperparams& hp_in,
                                             const SurrogateTrainCfg& scfg, const AttackConfig& acfg,
                                             std::uint64_t split_seed, const PipelineOptions& options) {
  PipelineResult r;

  {
    auto prepared = prepare_data(table, options, split_seed);
    r.stats = std::move(prepared.stats);
    r.split = std::move(prepared.split);
    r.train = std::move(prepared.train);
    r.test = std::move(prepared.test);
  }

  Hyperparams hp = hp_in;
  if (hp.n_classes == 0) hp.n_classes = r.stats.n_classes();
  require(hp.n_classes == r.stats.n_classes(), ErrorCategory::config,
          "pipeline: n_classes " + std::to_string(hp.n_classes) + " differs from the " +
              std::to_string(r.stats.n_classes()) + " labels in the data");
  const auto names = r.stats.labels();

  r.baseline = stage("train baseline", [&] { return train(r.train.X, r.train.y, hp, &r.baseline_log); });
  r.surrogate = stage("train surrogate", [&] {
    return train_surrogate(r.train.X, r.train.y, hp.n_classes, scfg, &r.surrogate_log);
  });

  stage("attack", [&] {
    const auto rows = attacked_rows(r.train.y.size(), options.attack_fraction, split_seed ^ 0xa77ac4ULL);
    const Dataset src{r.train.X.select(rows), select_labels(r.train.y, rows)};
    r.adv_train = {fgsm_batch(r.surrogate, src.X, src.y, acfg), src.y};
    r.adv_test = {fgsm_batch(r.surrogate, r.test.X, r.test.y, acfg), r.test.y};
    return 0;
  });
  r.surrogate_clean_accuracy = accuracy_of(r.test.y, surrogate_predict(r.surrogate, r.test.X));
  r.surrogate_adv_accuracy = accuracy_of(r.adv_test.y, surrogate_predict(r.surrogate, r.adv_test.X));

  r.robust = stage("train robust", [&] {
    const auto combined = augment(r.train.X, r.train.y, r.adv_train.X, r.adv_train.y, acfg.epsilon);
    return train(combined.X, combined.y, hp, &r.robust_log);
  });

  stage("evaluate", [&] {
    r.baseline_clean = evaluate(r.baseline, r.test, names);
    r.baseline_adv = evaluate(r.baseline, r.adv_test, names);
    r.robust_clean = evaluate(r.robust, r.test, names);
    r.robust_adv = evaluate(r.robust, r.adv_test, names);
    return 0;
  });
  return r;
}

}  // namespace advids
