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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include <cstring>
#include <set>

#include "advids/binning.hpp"
#include "advids/gbdt.hpp"
#include "advids/kernels.hpp"
#include "advids/rng.hpp"

using namespace advids;

namespace {

FeatureMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed, int distinct = 0) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
  FeatureMatrix X(n, names, std::vector<ColumnKind>(d, ColumnKind::numeric));
  Rng rng(seed);
  for (auto& v : X.values()) {
    v = distinct > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(distinct))) / distinct
                     : rng.uniform();
  }
  return X;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("cuts: one bin per value when few distinct values") {
  const auto X = random_matrix(500, 3, 1, 17);
  const auto cuts = compute_cuts(X, 32);
  for (std::size_t f = 0; f < 3; ++f) {
    std::set<double> distinct;
    for (std::size_t i = 0; i < X.n_rows(); ++i) distinct.insert(X.at(i, f));
    CHECK(std::vector<double>(distinct.begin(), distinct.end()) == cuts.cuts[f]);
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
      CHECK(cuts.cuts[f][cuts.bin_of(f, X.at(i, f))] == X.at(i, f));
    }
  }
}

TEST_CASE("cuts: capped bin count, ascending, ending at the maximum") {
  const auto X = random_matrix(5000, 2, 2);
  const auto cuts = compute_cuts(X, 16);
  for (std::size_t f = 0; f < 2; ++f) {
    const auto& c = cuts.cuts[f];
    CHECK(c.size() <= 16);
    CHECK(c.size() >= 8);
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(std::adjacent_find(c.begin(), c.end()) == c.end());
    double mx = 0;
    for (std::size_t i = 0; i < X.n_rows(); ++i) mx = std::max(mx, X.at(i, f));
    CHECK(c.back() == mx);
    // count balance: no bin holds more than three times its share
    std::vector<std::size_t> counts(c.size());
    for (std::size_t i = 0; i < X.n_rows(); ++i) ++counts[cuts.bin_of(f, X.at(i, f))];
    for (auto n : counts) CHECK(n <= 3 * X.n_rows() / c.size());
  }
  CHECK(cuts.bin_of(0, 2.0) == cuts.cuts[0].size() - 1);
  CHECK(cuts.bin_of(0, -1.0) == 0);
}

TEST_CASE("histogram: omp equals serial and a direct count") {
  const auto X = random_matrix(8000, 12, 3);  // large enough to take the parallel path
  const auto cuts = compute_cuts(X, 64);
  const auto binned = bin_matrix(X, cuts);
  Rng rng(4);
  std::vector<GradPair> gp(X.n_rows());
  for (auto& g : gp) g = {rng.normal(), rng.uniform()};
  std::vector<std::uint32_t> rows;
  for (std::uint32_t i = 0; i < X.n_rows(); i += 1 + static_cast<std::uint32_t>(rng.below(3))) rows.push_back(i);

  std::vector<HistBin> a(binned.hist_size()), b(binned.hist_size());
  kernels::serial::build_histogram(binned, rows, gp, a);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    std::fill(b.begin(), b.end(), HistBin{});
    kernels::omp::build_histogram(binned, rows, gp, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::memcmp(&a[i].g, &b[i].g, sizeof(double)) == 0);
      CHECK(std::memcmp(&a[i].h, &b[i].h, sizeof(double)) == 0);
      CHECK(a[i].count == b[i].count);
    }
  }
  omp_set_num_threads(1);
  for (std::size_t f = 0; f < binned.n_features(); ++f) {
    std::int64_t total = 0;
    for (std::size_t k = 0; k < binned.n_bins(f); ++k) total += a[binned.hist_offset[f] + k].count;
    CHECK(total == static_cast<std::int64_t>(rows.size()));
  }
}

TEST_CASE("predict: omp equals serial and a per-tree loop") {
  const auto X = random_matrix(400, 5, 5);
  LabelVector y(X.n_rows());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = X.at(i, 0) + X.at(i, 1) > 1.0 ? (X.at(i, 2) > 0.5 ? 2 : 1) : 0;
  Hyperparams hp;
  hp.n_classes = 3;
  hp.rounds = 6;
  hp.max_depth = 3;
  const auto m = train(X, y, hp);
  std::vector<double> s(X.n_rows() * 3), o(X.n_rows() * 3);
  kernels::serial::predict_scores(m.trees(), m.base_score(), X, s);
  omp_set_num_threads(3);
  kernels::omp::predict_scores(m.trees(), m.base_score(), X, o);
  omp_set_num_threads(1);
  CHECK(same_bits(s, o));
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      double v = m.base_score()[k];
      for (std::size_t r = 0; r < m.n_rounds(); ++r) v += m.tree(r, k).predict(X.row(i));
      CHECK(v == s[i * 3 + k]);
    }
  }
}

TEST_CASE("fgsm: omp equals serial") {
  const auto X = random_matrix(700, 9, 6);
  LabelVector y(X.n_rows());
  Rng rng(7);
  for (auto& l : y) l = static_cast<std::int32_t>(rng.below(4));
  auto p = SurrogateParams::zeros(9, 4);
  for (auto& w : p.weights) w = rng.normal();
  for (auto& b : p.bias) b = rng.normal();
  AttackConfig cfg;
  cfg.epsilon = 0.07;
  cfg.perturb_mask = {true, false, true, true, true, false, true, true, true};
  FeatureMatrix a = X, b = X;
  kernels::serial::fgsm_rows(p, X, y, cfg, a);
  omp_set_num_threads(4);
  kernels::omp::fgsm_rows(p, X, y, cfg, b);
  omp_set_num_threads(1);
  CHECK(bit_equal(a, b));
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    CHECK(a.at(i, 1) == X.at(i, 1));
    CHECK(a.at(i, 5) == X.at(i, 5));
  }
}

TEST_CASE("transform: chunked omp kernel equals serial") {
  SynthSpec spec;
  spec.n_rows = 1234;
  spec.missing_rate = 0.2;
  spec.seed = 3;
  const auto t = synth_generate(spec);
  const auto stats = fit_stats(t);
  const auto plan = kernels::make_transform_plan(t, stats);
  const std::size_t d = stats.n_features();
  std::vector<double> a(t.n_rows() * d), b(t.n_rows() * d);
  std::vector<std::int32_t> la(t.n_rows()), lb(t.n_rows());
  kernels::serial::transform_rows(plan, 0, t.n_rows(), a, la);
  for (std::size_t workers : {1u, 2u, 5u}) {
    for (std::size_t chunk : {1u, 7u, 5000u}) {
      std::fill(b.begin(), b.end(), -1.0);
      kernels::omp::transform_rows(plan, chunk, workers, b, lb);
      CHECK(same_bits(a, b));
      CHECK(la == lb);
    }
  }
}
