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

#include "advids/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "advids/error.hpp"
#include "advids/hash.hpp"
#include "advids/rng.hpp"

namespace advids {

SurrogateParams SurrogateParams::zeros(std::size_t n_features, std::size_t n_classes) {
  require(n_features >= 1 && n_classes >= 2, ErrorCategory::invalid_argument,
          "surrogate needs >= 1 feature and >= 2 classes");
  return {n_features, n_classes, std::vector<double>(n_features * n_classes, 0.0),
          std::vector<double>(n_classes, 0.0)};
}

void SurrogateParams::validate() const {
  require(n_features >= 1 && n_classes >= 2 && weights.size() == n_features * n_classes &&
              bias.size() == n_classes,
          ErrorCategory::invalid_argument, "surrogate parameters have inconsistent shapes");
  const auto finite = [](double v) { return std::isfinite(v); };
  require(std::all_of(weights.begin(), weights.end(), finite) &&
              std::all_of(bias.begin(), bias.end(), finite),
          ErrorCategory::invalid_argument, "surrogate parameters are not finite");
}

std::string SurrogateParams::content_hash() const {
  return sha256_hex(nlohmann::json(*this).dump());
}

void to_json(nlohmann::json& j, const SurrogateParams& p) {
  j = {{"format", "advids.surrogate"},
       {"version", 1},
       {"n_features", p.n_features},
       {"n_classes", p.n_classes},
       {"weights", p.weights},
       {"bias", p.bias}};
}

void from_json(const nlohmann::json& j, SurrogateParams& p) {
  require(j.value("format", "") == "advids.surrogate" && j.value("version", 0) == 1,
          ErrorCategory::invalid_argument, "not an advids surrogate document (v1)");
  p.n_features = j.at("n_features").get<std::size_t>();
  p.n_classes = j.at("n_classes").get<std::size_t>();
  p.weights = j.at("weights").get<std::vector<double>>();
  p.bias = j.at("bias").get<std::vector<double>>();
  p.validate();
}

void SurrogateTrainCfg::validate() const {
  require(epochs >= 1, ErrorCategory::invalid_argument, "surrogate epochs must be >= 1");
  require(batch_size >= 1, ErrorCategory::invalid_argument, "surrogate batch_size must be >= 1");
  require(step_size >= 0.0 && std::isfinite(step_size), ErrorCategory::invalid_argument,
          "surrogate step_size must be finite and nonnegative");
  require(l2 >= 0.0, ErrorCategory::invalid_argument, "surrogate l2 must be nonnegative");
}

void to_json(nlohmann::json& j, const SurrogateTrainCfg& c) {
  j = {{"epochs", c.epochs},
       {"step_size", c.step_size},
       {"l2", c.l2},
       {"batch_size", c.batch_size},
       {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, SurrogateTrainCfg& c) {
  SurrogateTrainCfg d;
  c.epochs = j.value("epochs", d.epochs);
  c.step_size = j.value("step_size", d.step_size);
  c.l2 = j.value("l2", d.l2);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.seed = j.at("seed").get<std::uint64_t>();
}

namespace {

void check_shape(const SurrogateParams& p, std::span<const double> x, std::int32_t y) {
  require(x.size() == p.n_features, ErrorCategory::invalid_argument,
          "surrogate: input has " + std::to_string(x.size()) + " features, expected " +
              std::to_string(p.n_features));
  require(y >= 0 && static_cast<std::size_t>(y) < p.n_classes, ErrorCategory::invalid_argument,
          "surrogate: label out of range");
}

// Overwrites `scores` with softmax probabilities; returns log-sum-exp.
double softmax_lse(std::span<double> scores) {
  const double m = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& v : scores) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : scores) v /= total;
  return m + std::log(total);
}

}  // namespace

void surrogate_scores(const SurrogateParams& p, std::span<const double> x, std::span<double> scores) {
  std::copy(p.bias.begin(), p.bias.end(), scores.begin());
  for (std::size_t j = 0; j < p.n_features; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const double* w = p.weights.data() + j * p.n_classes;
    for (std::size_t k = 0; k < p.n_classes; ++k) scores[k] += w[k] * xj;
  }
}

double surrogate_loss(const SurrogateParams& p, std::span<const double> x, std::int32_t y) {
  check_shape(p, x, y);
  std::vector<double> s(p.n_classes);
  surrogate_scores(p, x, s);
  const double target = s[static_cast<std::size_t>(y)];
  return softmax_lse(s) - target;
}

void input_gradient(const SurrogateParams& p, std::span<const double> x, std::int32_t y,
                    std::span<double> grad, std::span<double> scratch) {
  surrogate_scores(p, x, scratch);
  softmax_lse(scratch);
  scratch[static_cast<std::size_t>(y)] -= 1.0;
  for (std::size_t j = 0; j < p.n_features; ++j) {
    const double* w = p.weights.data() + j * p.n_classes;
    double acc = 0.0;
    for (std::size_t k = 0; k < p.n_classes; ++k) acc += w[k] * scratch[k];
    grad[j] = acc;
  }
}

std::vector<double> input_gradient(const SurrogateParams& p, std::span<const double> x,
                                   std::int32_t y) {
  check_shape(p, x, y);
  std::vector<double> grad(p.n_features);
  std::vector<double> scratch(p.n_classes);
  input_gradient(p, x, y, grad, scratch);
  return grad;
}

double surrogate_objective(const SurrogateParams& p, const FeatureMatrix& X, const LabelVector& y,
                           double l2) {
  require(X.n_rows() > 0 && y.size() == X.n_rows(), ErrorCategory::invalid_argument,
          "surrogate objective needs matching nonempty X and y");
  std::vector<double> s(p.n_classes);
  double total = 0.0;
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    surrogate_scores(p, X.row(i), s);
    const double target = s[static_cast<std::size_t>(y[i])];
    total += softmax_lse(s) - target;
  }
  double penalty = 0.0;
  for (double w : p.weights) penalty += w * w;
  return total / static_cast<double>(X.n_rows()) + 0.5 * l2 * penalty;
}

LabelVector surrogate_predict(const SurrogateParams& p, const FeatureMatrix& X) {
  require(X.n_cols() == p.n_features, ErrorCategory::invalid_argument,
          "surrogate: matrix width differs from parameter dimensionality");
  LabelVector out(X.n_rows());
  std::vector<double> s(p.n_classes);
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    surrogate_scores(p, X.row(i), s);
    out[i] = static_cast<std::int32_t>(std::max_element(s.begin(), s.end()) - s.begin());
  }
  return out;
}

SurrogateParams train_surrogate(const FeatureMatrix& X, const LabelVector& y,
                                std::size_t n_classes, const SurrogateTrainCfg& cfg,
                                SurrogateTrainLog* log) {
  cfg.validate();
  require(X.n_rows() > 0, ErrorCategory::empty_input, "surrogate: empty training matrix");
  require(y.size() == X.n_rows(), ErrorCategory::invalid_argument,
          "surrogate: label count differs from row count");
  for (auto label : y) {
    require(label >= 0 && static_cast<std::size_t>(label) < n_classes,
            ErrorCategory::invalid_argument, "surrogate: label outside [0, n_classes)");
  }
  if (std::all_of(y.begin(), y.end(), [&](std::int32_t v) { return v == y.front(); })) {
    warn("surrogate: training labels hold a single class");
  }

  const std::size_t n = X.n_rows();
  const std::size_t d = X.n_cols();
  const std::size_t k = n_classes;
  SurrogateParams p = SurrogateParams::zeros(d, k);
  if (log) log->objective.push_back(surrogate_objective(p, X, y, cfg.l2));

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad_w(d * k);
  std::vector<double> grad_b(k);
  std::vector<double> s(k);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      for (std::size_t t = start; t < stop; ++t) {
        const std::size_t i = order[t];
        const auto x = X.row(i);
        surrogate_scores(p, x, s);
        softmax_lse(s);
        s[static_cast<std::size_t>(y[i])] -= 1.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double xj = x[j];
          if (xj == 0.0) continue;
          double* g = grad_w.data() + j * k;
          for (std::size_t c = 0; c < k; ++c) g[c] += xj * s[c];
        }
        for (std::size_t c = 0; c < k; ++c) grad_b[c] += s[c];
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (std::size_t idx = 0; idx < grad_w.size(); ++idx) {
        p.weights[idx] -= cfg.step_size * (grad_w[idx] * scale + cfg.l2 * p.weights[idx]);
      }
      for (std::size_t c = 0; c < k; ++c) p.bias[c] -= cfg.step_size * grad_b[c] * scale;
    }
    if (log) log->objective.push_back(surrogate_objective(p, X, y, cfg.l2));
  }
  return p;
}

}  // namespace advids
