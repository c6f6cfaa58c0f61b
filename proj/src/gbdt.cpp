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

#include "advids/gbdt.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "advids/binning.hpp"
#include "advids/error.hpp"
#include "advids/hash.hpp"
#include "advids/kernels.hpp"

namespace advids {

// --- Tree ---------------------------------------------------------------------

std::int32_t Tree::add_leaf(double weight) {
  feature.push_back(kLeaf);
  threshold.push_back(0.0);
  left.push_back(-1);
  right.push_back(-1);
  value.push_back(weight);
  gain.push_back(0.0);
  return static_cast<std::int32_t>(feature.size() - 1);
}

std::size_t Tree::leaf_index(std::span<const double> x) const {
  std::size_t node = 0;
  while (feature[node] != kLeaf) {
    const auto f = static_cast<std::size_t>(feature[node]);
    node = static_cast<std::size_t>(x[f] <= threshold[node] ? left[node] : right[node]);
  }
  return node;
}

std::size_t Tree::depth() const {
  if (feature.empty()) return 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!is_leaf(node)) {
      stack.emplace_back(static_cast<std::size_t>(left[node]), d + 1);
      stack.emplace_back(static_cast<std::size_t>(right[node]), d + 1);
    }
  }
  return deepest;
}

// --- Hyperparams ----------------------------------------------------------------

void Hyperparams::validate() const {
  require(max_depth >= 1, ErrorCategory::invalid_argument, "max_depth must be >= 1");
  require(learning_rate >= 0.0 && learning_rate <= 1.0, ErrorCategory::invalid_argument,
          "learning_rate must lie in [0, 1]");
  require(reg_lambda >= 0.0 && std::isfinite(reg_lambda), ErrorCategory::invalid_argument,
          "reg_lambda must be nonnegative");
  require(min_split_gain >= 0.0, ErrorCategory::invalid_argument,
          "min_split_gain must be nonnegative");
  require(min_child_weight >= 0.0, ErrorCategory::invalid_argument,
          "min_child_weight must be nonnegative");
  require(n_bins >= 2 && n_bins <= 65536, ErrorCategory::invalid_argument,
          "n_bins must lie in [2, 65536]");
  require(n_classes >= 2, ErrorCategory::invalid_argument, "n_classes must be >= 2");
}

void to_json(nlohmann::json& j, const Hyperparams& hp) {
  j = {{"max_depth", hp.max_depth},
       {"learning_rate", hp.learning_rate},
       {"rounds", hp.rounds},
       {"reg_lambda", hp.reg_lambda},
       {"min_split_gain", hp.min_split_gain},
       {"min_child_weight", hp.min_child_weight},
       {"n_bins", hp.n_bins},
       {"n_classes", hp.n_classes}};
}

void from_json(const nlohmann::json& j, Hyperparams& hp) {
  Hyperparams d;
  hp.max_depth = j.value("max_depth", d.max_depth);
  hp.learning_rate = j.value("learning_rate", d.learning_rate);
  hp.rounds = j.value("rounds", d.rounds);
  hp.reg_lambda = j.value("reg_lambda", d.reg_lambda);
  hp.min_split_gain = j.value("min_split_gain", d.min_split_gain);
  hp.min_child_weight = j.value("min_child_weight", d.min_child_weight);
  hp.n_bins = j.value("n_bins", d.n_bins);
  hp.n_classes = j.value("n_classes", d.n_classes);
}

// --- objective ------------------------------------------------------------------

namespace {

void softmax_unchecked(std::span<double> s) {
  const double m = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (double& v : s) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : s) v /= total;
}

}  // namespace

void softmax_inplace(std::span<double> scores) {
  require(!scores.empty(), ErrorCategory::invalid_argument, "softmax of an empty vector");
  for (double v : scores) {
    require(std::isfinite(v), ErrorCategory::invalid_argument, "softmax input is not finite");
  }
  softmax_unchecked(scores);
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  softmax_inplace(out);
  return out;
}

GradHess grad_hess(std::span<const double> probs, std::int32_t label) {
  require(label >= 0 && static_cast<std::size_t>(label) < probs.size(),
          ErrorCategory::invalid_argument, "label out of range for probability vector");
  GradHess out{std::vector<double>(probs.size()), std::vector<double>(probs.size())};
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = probs[k];
    out.g[k] = static_cast<std::int32_t>(k) == label ? p - 1.0 : p;
    out.h[k] = std::max(p * (1.0 - p), kHessianFloor);
  }
  return out;
}

// --- Ensemble -------------------------------------------------------------------

Ensemble::Ensemble(Hyperparams hp, std::size_t n_features)
    : hp_(hp), n_features_(n_features), base_score_(hp.n_classes, 0.0) {
  hp_.validate();
}

void Ensemble::add_round(std::vector<Tree> per_class) {
  require(per_class.size() == n_classes(), ErrorCategory::invalid_argument,
          "a boosting round needs one tree per class");
  for (auto& t : per_class) trees_.push_back(std::move(t));
}

nlohmann::json Ensemble::to_json() const {
  auto trees = nlohmann::json::array();
  for (const auto& t : trees_) {
    trees.push_back({{"feature", t.feature},
                     {"threshold", t.threshold},
                     {"left", t.left},
                     {"right", t.right},
                     {"value", t.value},
                     {"gain", t.gain}});
  }
  return {{"format", "advids.ensemble"},
          {"version", 1},
          {"hyperparams", hp_},
          {"n_features", n_features_},
          {"base_score", base_score_},
          {"trees", std::move(trees)}};
}

Ensemble Ensemble::from_json(const nlohmann::json& j) {
  require(j.value("format", "") == "advids.ensemble" && j.value("version", 0) == 1,
          ErrorCategory::invalid_argument, "not an advids ensemble document (v1)");
  Ensemble m(j.at("hyperparams").get<Hyperparams>(), j.at("n_features").get<std::size_t>());
  m.base_score_ = j.at("base_score").get<std::vector<double>>();
  require(m.base_score_.size() == m.n_classes(), ErrorCategory::invalid_argument,
          "ensemble: base_score length differs from n_classes");
  for (const auto& jt : j.at("trees")) {
    Tree t;
    t.feature = jt.at("feature").get<std::vector<std::int32_t>>();
    t.threshold = jt.at("threshold").get<std::vector<double>>();
    t.left = jt.at("left").get<std::vector<std::int32_t>>();
    t.right = jt.at("right").get<std::vector<std::int32_t>>();
    t.value = jt.at("value").get<std::vector<double>>();
    t.gain = jt.at("gain").get<std::vector<double>>();
    const std::size_t n = t.feature.size();
    require(n > 0 && t.threshold.size() == n && t.left.size() == n && t.right.size() == n &&
                t.value.size() == n && t.gain.size() == n,
            ErrorCategory::invalid_argument, "ensemble: ragged tree arrays");
    for (std::size_t i = 0; i < n; ++i) {
      if (t.feature[i] == Tree::kLeaf) continue;
      require(t.feature[i] >= 0 && static_cast<std::size_t>(t.feature[i]) < m.n_features_ &&
                  t.left[i] > static_cast<std::int32_t>(i) && t.right[i] > static_cast<std::int32_t>(i) &&
                  static_cast<std::size_t>(t.left[i]) < n && static_cast<std::size_t>(t.right[i]) < n,
              ErrorCategory::invalid_argument, "ensemble: malformed tree node");
    }
    m.trees_.push_back(std::move(t));
  }
  require(m.trees_.size() % m.n_classes() == 0, ErrorCategory::invalid_argument,
          "ensemble: tree count is not a multiple of n_classes");
  return m;
}

std::string Ensemble::content_hash() const { return sha256_hex(to_json().dump()); }

// --- training -------------------------------------------------------------------

namespace {

struct SplitChoice {
  std::size_t feature = 0;
  std::size_t bin = 0;
  double gain = 0.0;
  GradPair left;
};

struct LeafRange {
  std::size_t begin;
  std::size_t end;
  double value;
};

class TreeBuilder {
 public:
  TreeBuilder(const BinnedMatrix& binned, const BinCuts& cuts, const Hyperparams& hp)
      : binned_(binned), cuts_(cuts), hp_(hp), rows_(binned.n_rows), gains_(binned.hist_size()) {}

  /// Grows one tree on `gpair` and adds its leaf values to column `cls` of
  /// the n x K score matrix.
  Tree build(std::span<const GradPair> gpair, std::span<double> scores, std::size_t cls) {
    gpair_ = gpair;
    tree_ = Tree{};
    leaves_.clear();
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] = static_cast<std::uint32_t>(i);

    GradPair sum;
    for (const auto& gp : gpair) sum += gp;
    std::vector<HistBin> hist(binned_.hist_size());
    kernels::omp::build_histogram(binned_, rows_, gpair_, hist);
    const auto root = tree_.add_leaf(0.0);
    grow(static_cast<std::size_t>(root), 0, rows_.size(), 0, std::move(hist), sum);

    const std::size_t k = scores.size() / rows_.size();
    for (const auto& leaf : leaves_) {
      for (std::size_t i = leaf.begin; i < leaf.end; ++i) scores[rows_[i] * k + cls] += leaf.value;
    }
    return std::move(tree_);
  }

 private:
  double leaf_weight(const GradPair& s) const {
    return -s.g / (s.h + hp_.reg_lambda) * hp_.learning_rate;
  }

  double score(double g, double h) const { return g * g / (h + hp_.reg_lambda); }

  std::optional<SplitChoice> find_split(const std::vector<HistBin>& hist, const GradPair& sum,
                                        std::int64_t count) {
    const double parent = score(sum.g, sum.h);
    constexpr double kInvalid = -std::numeric_limits<double>::infinity();
    double best = kInvalid;
    const std::size_t d = binned_.n_features();
    for (std::size_t f = 0; f < d; ++f) {
      const std::size_t off = binned_.hist_offset[f];
      const std::size_t nb = binned_.n_bins(f);
      double gl = 0.0;
      double hl = 0.0;
      std::int64_t nl = 0;
      for (std::size_t b = 0; b < nb; ++b) {
        gl += hist[off + b].g;
        hl += hist[off + b].h;
        nl += hist[off + b].count;
        const double gr = sum.g - gl;
        const double hr = sum.h - hl;
        const std::int64_t nr = count - nl;
        double gain = kInvalid;
        if (b + 1 < nb && nl > 0 && nr > 0 && hl >= hp_.min_child_weight &&
            hr >= hp_.min_child_weight) {
          gain = 0.5 * (score(gl, hl) + score(gr, hr) - parent);
          best = std::max(best, gain);
        }
        gains_[off + b] = gain;
      }
    }
    // Gains within rounding of the parent score count as zero, so a pure
    // node under reg_lambda = 0 never splits on noise.
    const double min_gain = hp_.min_split_gain + kGainTieTolerance * std::max(1.0, std::abs(parent));
    if (!(best > min_gain)) return std::nullopt;

    const double cutoff = best - kGainTieTolerance * std::max(1.0, std::abs(best));
    for (std::size_t f = 0; f < d; ++f) {
      const std::size_t off = binned_.hist_offset[f];
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t b = 0; b + 1 < binned_.n_bins(f); ++b) {
        gl += hist[off + b].g;
        hl += hist[off + b].h;
        const double gain = gains_[off + b];
        if (gain >= cutoff && gain > min_gain) return SplitChoice{f, b, gain, {gl, hl}};
      }
    }
    return std::nullopt;
  }

  void make_leaf(std::size_t node, std::size_t begin, std::size_t end, const GradPair& sum) {
    const double w = leaf_weight(sum);
    tree_.value[node] = w;
    leaves_.push_back({begin, end, w});
  }

  void grow(std::size_t node, std::size_t begin, std::size_t end, std::size_t depth,
            std::vector<HistBin> hist, const GradPair& sum) {
    const auto count = static_cast<std::int64_t>(end - begin);
    std::optional<SplitChoice> split;
    if (depth < hp_.max_depth && count >= 2) split = find_split(hist, sum, count);
    if (!split) {
      make_leaf(node, begin, end, sum);
      return;
    }

    const std::uint16_t* col = binned_.bins.data() + split->feature * binned_.n_rows;
    const auto bin = split->bin;
    const auto mid_it = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(end),
        [col, bin](std::uint32_t r) { return col[r] <= bin; });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());

    tree_.feature[node] = static_cast<std::int32_t>(split->feature);
    tree_.threshold[node] = cuts_.cuts[split->feature][split->bin];
    tree_.gain[node] = split->gain;
    const auto l = tree_.add_leaf(0.0);
    const auto r = tree_.add_leaf(0.0);
    tree_.left[node] = l;
    tree_.right[node] = r;

    const GradPair left_sum = split->left;
    const GradPair right_sum = sum - left_sum;
    const bool left_grows = depth + 1 < hp_.max_depth && mid - begin >= 2;
    const bool right_grows = depth + 1 < hp_.max_depth && end - mid >= 2;
    std::vector<HistBin> left_hist;
    std::vector<HistBin> right_hist;
    if (left_grows || right_grows) {
      // Build the smaller child directly; the larger is parent minus smaller.
      const bool left_smaller = (mid - begin) <= (end - mid);
      std::vector<HistBin> small(binned_.hist_size());
      const std::span<const std::uint32_t> small_rows =
          left_smaller ? std::span<const std::uint32_t>(rows_.data() + begin, mid - begin)
                       : std::span<const std::uint32_t>(rows_.data() + mid, end - mid);
      kernels::omp::build_histogram(binned_, small_rows, gpair_, small);
      for (std::size_t i = 0; i < hist.size(); ++i) hist[i] -= small[i];
      left_hist = left_smaller ? std::move(small) : std::move(hist);
      right_hist = left_smaller ? std::move(hist) : std::move(small);
    }
    grow(static_cast<std::size_t>(l), begin, mid, depth + 1, std::move(left_hist), left_sum);
    grow(static_cast<std::size_t>(r), mid, end, depth + 1, std::move(right_hist), right_sum);
  }

  const BinnedMatrix& binned_;
  const BinCuts& cuts_;
  const Hyperparams& hp_;
  std::vector<std::uint32_t> rows_;
  std::vector<double> gains_;
  std::span<const GradPair> gpair_;
  Tree tree_;
  std::vector<LeafRange> leaves_;
};

double logloss_from_scores(std::span<const double> scores, const LabelVector& y, std::size_t k) {
  const std::size_t n = y.size();
  std::vector<double> row(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(scores.data() + i * k, k, row.data());
    softmax_unchecked(row);
    const double p = std::clamp(row[static_cast<std::size_t>(y[i])], 1e-15, 1.0 - 1e-15);
    total -= std::log(p);
  }
  return total / static_cast<double>(n);
}

}  // namespace

Ensemble train(const FeatureMatrix& X, const LabelVector& y, const Hyperparams& hp, TrainLog* log) {
  hp.validate();
  require(X.n_rows() > 0 && X.n_cols() > 0, ErrorCategory::empty_input,
          "train: feature matrix is empty");
  require(y.size() == X.n_rows(), ErrorCategory::invalid_argument,
          "train: label count differs from row count");
  require(X.n_rows() < std::numeric_limits<std::uint32_t>::max(), ErrorCategory::invalid_argument,
          "train: too many rows");
  const std::size_t k = hp.n_classes;
  for (auto label : y) {
    require(label >= 0 && static_cast<std::size_t>(label) < k, ErrorCategory::invalid_argument,
            "train: label " + std::to_string(label) + " outside [0, n_classes)");
  }
  if (std::all_of(y.begin(), y.end(), [&](std::int32_t v) { return v == y.front(); })) {
    warn("train: label vector holds a single class; the model will predict class " +
         std::to_string(y.front()));
  }

  const BinCuts cuts = compute_cuts(X, hp.n_bins);
  const BinnedMatrix binned = bin_matrix(X, cuts);
  Ensemble model(hp, X.n_cols());

  const std::size_t n = X.n_rows();
  std::vector<double> scores(n * k, 0.0);
  std::vector<std::vector<GradPair>> gpair(k, std::vector<GradPair>(n));
  TreeBuilder builder(binned, cuts, hp);
  const auto n_signed = static_cast<std::int64_t>(n);

  for (std::size_t round = 0; round < hp.rounds; ++round) {
#pragma omp parallel
    {
      std::vector<double> p(k);
#pragma omp for schedule(static)
      for (std::int64_t si = 0; si < n_signed; ++si) {
        const auto i = static_cast<std::size_t>(si);
        std::copy_n(scores.data() + i * k, k, p.data());
        softmax_unchecked(p);
        for (std::size_t c = 0; c < k; ++c) {
          const double g = static_cast<std::int32_t>(c) == y[i] ? p[c] - 1.0 : p[c];
          gpair[c][i] = {g, std::max(p[c] * (1.0 - p[c]), kHessianFloor)};
        }
      }
    }
    std::vector<Tree> per_class;
    per_class.reserve(k);
    for (std::size_t c = 0; c < k; ++c) per_class.push_back(builder.build(gpair[c], scores, c));
    model.add_round(std::move(per_class));
    if (log) log->logloss.push_back(logloss_from_scores(scores, y, k));
  }
  return model;
}

// --- prediction -----------------------------------------------------------------

std::vector<double> predict_scores(const Ensemble& m, const FeatureMatrix& X) {
  require(m.n_classes() >= 2, ErrorCategory::invalid_argument, "predict: ensemble is untrained");
  require(X.n_cols() == m.n_features(), ErrorCategory::invalid_argument,
          "predict: matrix has " + std::to_string(X.n_cols()) + " features, model expects " +
              std::to_string(m.n_features()));
  std::vector<double> scores(X.n_rows() * m.n_classes());
  kernels::omp::predict_scores(m.trees(), m.base_score(), X, scores);
  return scores;
}

ProbaMatrix predict_proba(const Ensemble& m, const FeatureMatrix& X) {
  ProbaMatrix out{X.n_rows(), m.n_classes(), predict_scores(m, X)};
  const auto n = static_cast<std::int64_t>(out.n_rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    softmax_unchecked({out.values.data() + static_cast<std::size_t>(i) * out.n_classes, out.n_classes});
  }
  return out;
}

LabelVector argmax_rows(const ProbaMatrix& p) {
  LabelVector out(p.n_rows);
  for (std::size_t i = 0; i < p.n_rows; ++i) {
    const auto r = p.row(i);
    std::size_t best = 0;
    for (std::size_t k = 1; k < r.size(); ++k) {
      if (r[k] > r[best]) best = k;
    }
    out[i] = static_cast<std::int32_t>(best);
  }
  return out;
}

LabelVector predict_class(const Ensemble& m, const FeatureMatrix& X) {
  return argmax_rows(predict_proba(m, X));
}

double logloss(const ProbaMatrix& p, const LabelVector& y) {
  require(p.n_rows > 0, ErrorCategory::invalid_argument, "logloss of an empty prediction set");
  require(y.size() == p.n_rows, ErrorCategory::invalid_argument,
          "logloss: label count differs from row count");
  double total = 0.0;
  for (std::size_t i = 0; i < p.n_rows; ++i) {
    require(y[i] >= 0 && static_cast<std::size_t>(y[i]) < p.n_classes,
            ErrorCategory::invalid_argument, "logloss: label out of range");
    const double v = std::clamp(p.row(i)[static_cast<std::size_t>(y[i])], 1e-15, 1.0 - 1e-15);
    total -= std::log(v);
  }
  return total / static_cast<double>(p.n_rows);
}

std::vector<FeatureGain> feature_importance(const Ensemble& m) {
  std::map<std::size_t, double> total;
  for (const auto& t : m.trees()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!t.is_leaf(i)) total[static_cast<std::size_t>(t.feature[i])] += t.gain[i];
    }
  }
  std::vector<FeatureGain> out;
  for (const auto& [f, g] : total) out.push_back({f, g});
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureGain& a, const FeatureGain& b) { return a.gain > b.gain; });
  return out;
}

}  // namespace advids
