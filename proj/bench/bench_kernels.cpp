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

// Serial reference kernels against their OpenMP counterparts. The thread
// count is the second benchmark argument; the serial runs ignore it.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "advids/binning.hpp"
#include "advids/gbdt.hpp"
#include "advids/kernels.hpp"
#include "advids/rng.hpp"

namespace {

using namespace advids;

FeatureMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
  FeatureMatrix X(n, names, std::vector<ColumnKind>(d, ColumnKind::numeric));
  Rng rng(seed);
  for (auto& v : X.values()) v = rng.uniform();
  return X;
}

struct TransformFixture {
  FlowTable table;
  PreprocessStats stats;
  kernels::TransformPlan plan;
  std::vector<double> out;
  std::vector<std::int32_t> labels;

  explicit TransformFixture(std::size_t rows) : table(make(rows)), stats(fit_stats(table)) {
    plan = kernels::make_transform_plan(table, stats);
    out.resize(rows * stats.n_features());
    labels.resize(rows);
  }

  static FlowTable make(std::size_t rows) {
    SynthSpec spec;
    spec.n_rows = rows;
    spec.missing_rate = 0.02;
    spec.seed = 1;
    return synth_generate(spec);
  }
};

TransformFixture& transform_fixture() {
  static TransformFixture f(200'000);
  return f;
}

void BM_TransformSerial(benchmark::State& state) {
  auto& f = transform_fixture();
  for (auto _ : state) {
    kernels::serial::transform_rows(f.plan, 0, f.plan.n_rows, f.out, f.labels);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.plan.n_rows));
}

void BM_TransformOmp(benchmark::State& state) {
  auto& f = transform_fixture();
  const auto workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    kernels::omp::transform_rows(f.plan, static_cast<std::size_t>(state.range(0)), workers, f.out, f.labels);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.plan.n_rows));
}

struct HistFixture {
  BinnedMatrix binned;
  std::vector<GradPair> gpair;
  std::vector<std::uint32_t> rows;
  std::vector<HistBin> hist;

  HistFixture() {
    const auto X = random_matrix(200'000, 24, 2);
    binned = bin_matrix(X, compute_cuts(X, 256));
    Rng rng(3);
    gpair.resize(X.n_rows());
    for (auto& g : gpair) g = {rng.normal(), rng.uniform()};
    rows.resize(X.n_rows());
    for (std::uint32_t i = 0; i < rows.size(); ++i) rows[i] = i;
    hist.resize(binned.hist_size());
  }
};

HistFixture& hist_fixture() {
  static HistFixture f;
  return f;
}

void BM_HistogramSerial(benchmark::State& state) {
  auto& f = hist_fixture();
  for (auto _ : state) {
    kernels::serial::build_histogram(f.binned, f.rows, f.gpair, f.hist);
    benchmark::DoNotOptimize(f.hist.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.rows.size()));
}

void BM_HistogramOmp(benchmark::State& state) {
  auto& f = hist_fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::omp::build_histogram(f.binned, f.rows, f.gpair, f.hist);
    benchmark::DoNotOptimize(f.hist.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.rows.size()));
}

struct ModelFixture {
  FeatureMatrix X;
  LabelVector y;
  Ensemble model;
  SurrogateParams surrogate;
  std::vector<double> scores;

  ModelFixture() : X(random_matrix(50'000, 24, 4)), y(X.n_rows()) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = static_cast<std::int32_t>((X.at(i, 0) > 0.5) + 2 * (X.at(i, 1) > 0.5));
    }
    Hyperparams hp;
    hp.n_classes = 4;
    hp.rounds = 30;
    model = train(X, y, hp);
    SurrogateTrainCfg cfg;
    cfg.epochs = 3;
    cfg.seed = 5;
    surrogate = train_surrogate(X, y, 4, cfg);
    scores.resize(X.n_rows() * 4);
  }
};

ModelFixture& model_fixture() {
  static ModelFixture f;
  return f;
}

void BM_PredictSerial(benchmark::State& state) {
  auto& f = model_fixture();
  for (auto _ : state) {
    kernels::serial::predict_scores(f.model.trees(), f.model.base_score(), f.X, f.scores);
    benchmark::DoNotOptimize(f.scores.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.X.n_rows()));
}

void BM_PredictOmp(benchmark::State& state) {
  auto& f = model_fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::omp::predict_scores(f.model.trees(), f.model.base_score(), f.X, f.scores);
    benchmark::DoNotOptimize(f.scores.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.X.n_rows()));
}

void BM_FgsmSerial(benchmark::State& state) {
  auto& f = model_fixture();
  FeatureMatrix out = f.X;
  AttackConfig cfg;
  for (auto _ : state) {
    kernels::serial::fgsm_rows(f.surrogate, f.X, f.y, cfg, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.X.n_rows()));
}

void BM_FgsmOmp(benchmark::State& state) {
  auto& f = model_fixture();
  FeatureMatrix out = f.X;
  AttackConfig cfg;
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::omp::fgsm_rows(f.surrogate, f.X, f.y, cfg, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.X.n_rows()));
}

const std::vector<std::int64_t> kThreads{1, 2, 4, 8};

}  // namespace

BENCHMARK(BM_TransformSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformOmp)->ArgsProduct({{1024, 16384}, kThreads})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramOmp)->ArgsProduct({kThreads})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictOmp)->ArgsProduct({kThreads})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FgsmSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FgsmOmp)->ArgsProduct({kThreads})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
