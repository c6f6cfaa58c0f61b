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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and limits are pinned below.

#include <omp.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "advids/advtrain.hpp"
#include "advids/cli/commands.hpp"
#include "advids/hash.hpp"
#include "advids/kernels.hpp"
#include "advids/rng.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

extern char** environ;

namespace {

using namespace advids;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// --- pinned tolerances and limits --------------------------------------------

constexpr int kOracleDatasets = 50;
constexpr double kLeafTolerance = 1e-9;
constexpr double kOracleSeconds = 30.0;

constexpr int kGradHessCases = 1000;
constexpr int kInputGradCases = 500;
constexpr double kGradRelError = 1e-4;
constexpr double kGradSeconds = 10.0;

constexpr double kTransformSeconds = 60.0;

constexpr int kMetricVectors = 100;
constexpr double kLogLossTolerance = 1e-12;

constexpr double kBaselineCleanMin = 0.90;
constexpr double kSurrogateDropMin = 0.20;
constexpr double kBoosterDropMin = 0.05;
constexpr double kCleanGapMax = 0.02;
constexpr double kFixtureSeconds = 300.0;

constexpr std::size_t kScaleRows = 1'000'000;
constexpr std::size_t kScaleRounds = 20;
constexpr std::size_t kScaleChunkRows = 65'536;
constexpr long kScaleRssBudgetMiB = 1536;
constexpr double kScaleSeconds = 900.0;

// Fixture outcomes recorded on the first verified run (15000 test rows).
struct Golden {
  std::size_t baseline_clean_hits;
  std::size_t baseline_adv_hits;
  std::size_t robust_clean_hits;
  std::size_t robust_adv_hits;
  std::size_t surrogate_clean_hits;
  std::size_t surrogate_adv_hits;
};
constexpr Golden kFixtureGolden{14890, 3379, 14811, 14638, 14792, 1892};

// -----------------------------------------------------------------------------

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("AC%d %s %s: %s\n", id, ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path source_dir() { return ADVIDS_SOURCE_DIR; }

FeatureMatrix numeric_matrix(std::size_t n, std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
  return FeatureMatrix(n, names, std::vector<ColumnKind>(d, ColumnKind::numeric));
}

// --- AC1 ----------------------------------------------------------------------

void ac1_oracle() {
  const auto t0 = Clock::now();
  Rng rng(0xac1);
  int matched = 0;
  std::size_t trees = 0;
  std::size_t splits = 0;
  std::string first_failure;
  for (int c = 0; c < kOracleDatasets; ++c) {
    const std::size_t n = 2 + rng.below(199);
    const std::size_t d = 1 + rng.below(3);
    const std::size_t k = 2 + rng.below(2);
    auto X = numeric_matrix(n, d);
    // Mix of continuous and heavily tied columns.
    for (std::size_t j = 0; j < d; ++j) {
      const bool tied = rng.below(2) == 0;
      const auto levels = 2 + rng.below(8);
      for (std::size_t i = 0; i < n; ++i) {
        X.at(i, j) = tied ? static_cast<double>(rng.below(levels)) : rng.normal();
      }
    }
    LabelVector y(n);
    for (auto& l : y) l = static_cast<std::int32_t>(rng.below(k));
    Hyperparams hp;
    hp.n_classes = k;
    hp.rounds = 1;
    hp.max_depth = 1 + rng.below(2);
    hp.reg_lambda = static_cast<double>(rng.below(2));
    hp.min_child_weight = rng.below(2) ? 0.0 : 1.0;
    hp.learning_rate = 0.05 + 0.95 * rng.uniform();
    hp.n_bins = std::max<std::size_t>(n, 2);
    const auto m = train(X, y, hp);

    const oracle::SplitParams sp{hp.max_depth, hp.learning_rate, hp.reg_lambda, hp.min_split_gain,
                                 hp.min_child_weight};
    const double p = 1.0 / static_cast<double>(k);
    bool ok = true;
    for (std::size_t cls = 0; cls < k; ++cls) {
      std::vector<double> g(n), h(n, std::max(p * (1 - p), 1e-16));
      for (std::size_t i = 0; i < n; ++i) g[i] = p - (static_cast<std::size_t>(y[i]) == cls ? 1.0 : 0.0);
      const auto ref = oracle::exhaustive_tree(X, g, h, sp);
      std::string why;
      const auto& t = m.tree(0, cls);
      ++trees;
      for (std::size_t node = 0; node < t.size(); ++node) splits += !t.is_leaf(node);
      if (!oracle::same_tree(t, 0, *ref, kLeafTolerance, why)) {
        ok = false;
        if (first_failure.empty()) first_failure = fmt("dataset %d class %zu: %s", c, cls, why.c_str());
      }
    }
    matched += ok;
  }
  const double secs = seconds_since(t0);
  report(1, "booster oracle equivalence", matched == kOracleDatasets && secs < kOracleSeconds,
         fmt("%d/%d datasets, %zu trees, %zu splits, %.2f s (limit %.0f s)%s%s", matched, kOracleDatasets, trees,
             splits, secs, kOracleSeconds, first_failure.empty() ? "" : "; ", first_failure.c_str()));
}

// --- AC2 ----------------------------------------------------------------------

void ac2_gradients() {
  const auto t0 = Clock::now();
  Rng rng(0xac2);
  double worst_g = 0.0;
  double worst_h = 0.0;
  std::size_t entries = 0;
  for (int c = 0; c < kGradHessCases; ++c) {
    const std::size_t k = 2 + rng.below(9);
    std::vector<long double> s(k);
    for (auto& v : s) v = 8.0L * rng.uniform() - 4.0L;
    const auto label = static_cast<std::size_t>(rng.below(k));
    const std::vector<double> sd(s.begin(), s.end());
    const auto gh = grad_hess(softmax(sd), static_cast<std::int32_t>(label));
    auto loss = [&](std::span<const long double> x) { return oracle::softmax_ce(x, label); };
    for (std::size_t j = 0; j < k; ++j) {
      worst_g = std::max(worst_g, oracle::rel_error(gh.g[j], oracle::diff1(loss, s, j, 1e-6L)));
      worst_h = std::max(worst_h, oracle::rel_error(gh.h[j], oracle::diff2(loss, s, j, 1e-4L)));
      ++entries;
    }
  }
  double worst_x = 0.0;
  std::size_t x_entries = 0;
  for (int c = 0; c < kInputGradCases; ++c) {
    const std::size_t d = 1 + rng.below(24);
    const std::size_t k = 2 + rng.below(9);
    auto p = SurrogateParams::zeros(d, k);
    for (auto& w : p.weights) w = rng.normal();
    for (auto& b : p.bias) b = rng.normal();
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform();
    const auto y = static_cast<std::size_t>(rng.below(k));
    const auto g = input_gradient(p, x, static_cast<std::int32_t>(y));
    auto loss = [&](std::span<const long double> z) {
      std::vector<long double> s(k);
      for (std::size_t cls = 0; cls < k; ++cls) {
        s[cls] = p.bias[cls];
        for (std::size_t j = 0; j < d; ++j) s[cls] += static_cast<long double>(p.weight(j, cls)) * z[j];
      }
      return oracle::softmax_ce(s, y);
    };
    const std::vector<long double> xl(x.begin(), x.end());
    for (std::size_t j = 0; j < d; ++j) {
      worst_x = std::max(worst_x, oracle::rel_error(g[j], oracle::diff1(loss, xl, j, 1e-6L)));
      ++x_entries;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_g < kGradRelError && worst_h < kGradRelError && worst_x < kGradRelError && secs < kGradSeconds;
  report(2, "gradient checks", ok,
         fmt("grad_hess %d cases (%zu entries) max rel err g %.2e h %.2e; input_gradient %d cases (%zu entries) "
             "max rel err %.2e; limit %.0e; %.2f s (limit %.0f s)",
             kGradHessCases, entries, worst_g, worst_h, kInputGradCases, x_entries, worst_x, kGradRelError, secs,
             kGradSeconds));
}

// --- AC3 ----------------------------------------------------------------------

void ac3_fgsm() {
  constexpr std::size_t n = 1000;
  constexpr std::size_t d = 20;
  constexpr std::size_t k = 10;
  constexpr double eps = 0.1;
  Rng rng(0xac3);
  auto X = numeric_matrix(n, d);
  for (auto& v : X.values()) v = rng.uniform();
  // Put some entries on the clip bounds.
  for (std::size_t i = 0; i < n; i += 7) X.at(i, i % d) = (i % 2) ? 1.0 : 0.0;
  LabelVector y(n);
  for (auto& l : y) l = static_cast<std::int32_t>(rng.below(k));
  auto p = SurrogateParams::zeros(d, k);
  for (auto& w : p.weights) w = rng.normal();
  for (auto& b : p.bias) b = rng.normal();
  // A zero weight row gives exactly zero gradient in that feature.
  for (std::size_t c = 0; c < k; ++c) p.weights[3 * k + c] = 0.0;

  AttackConfig zero;
  zero.epsilon = 0.0;
  const bool identity = bit_equal(fgsm_batch(p, X, y, zero), X);

  AttackConfig open;
  open.epsilon = eps;
  open.clip_min = -std::numeric_limits<double>::infinity();
  open.clip_max = std::numeric_limits<double>::infinity();
  const auto pre = fgsm_batch(p, X, y, open);
  const auto signs = gradient_signs(p, X, y);
  std::size_t bad_pre = 0;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const int s = signs[i * d + j];
      const double delta = eps * s;  // the perturbation the kernel adds
      const bool in_set = delta == 0.0 || std::abs(delta) == eps;
      if (!in_set || pre.at(i, j) != X.at(i, j) + delta) ++bad_pre;
      zeros += s == 0;
    }
  }

  AttackConfig clipped;
  clipped.epsilon = eps;
  const auto post = fgsm_batch(p, X, y, clipped);
  std::size_t out_of_range = 0;
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = post.at(i, j);
      out_of_range += !(v >= 0.0 && v <= 1.0);
      mismatched += v != std::clamp(pre.at(i, j), 0.0, 1.0);
    }
  }
  report(3, "FGSM algebra", identity && bad_pre == 0 && out_of_range == 0 && mismatched == 0,
         fmt("%zux%zu entries; eps=0 bit-exact %s; pre-clip perturbation outside {0, eps}: %zu (%zu zero-gradient "
             "entries); post-clip outside [0,1]: %zu; post != clip(pre): %zu",
             n, d, identity ? "yes" : "no", bad_pre, zeros, out_of_range, mismatched));
}

// --- AC4 ----------------------------------------------------------------------

void ac4_parallel_transform() {
  const auto t0 = Clock::now();
  SynthSpec spec;
  spec.n_rows = 100'000;
  spec.missing_rate = 0.05;
  spec.seed = 0xac4;
  const auto table = synth_generate(spec);
  const auto stats = fit_stats(table);
  const auto ref = transform(table, stats);
  int runs = 0;
  int equal = 0;
  for (std::size_t workers : {1u, 2u, 4u, 8u}) {
    for (std::size_t chunk : {1u, 37u, 10'000u}) {
      const auto par = transform_parallel(table, stats, chunk, workers);
      ++runs;
      equal += bit_equal(par.X, ref.X) && par.y == ref.y;
    }
  }
  const double secs = seconds_since(t0);
  report(4, "parallel determinism", equal == runs && secs < kTransformSeconds,
         fmt("%d/%d (workers x chunk_rows) runs bit-identical to serial on %zu rows x %zu features; %.2f s (limit %.0f s)",
             equal, runs, spec.n_rows, stats.n_features(), secs, kTransformSeconds));
}

// --- AC5 ----------------------------------------------------------------------

void ac5_metrics() {
  Rng rng(0xac5);
  int ok_vectors = 0;
  for (int t = 0; t < kMetricVectors; ++t) {
    const std::size_t k = 2 + rng.below(9);
    const std::size_t n = 1 + rng.below(2000);
    LabelVector a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<std::int32_t>(rng.below(k));
      b[i] = rng.below(2) ? a[i] : static_cast<std::int32_t>(rng.below(k));
    }
    const auto cm = confusion(a, b, k);
    const auto r = report(cm);
    const double acc = oracle::match_fraction(a, b);
    const bool ok = static_cast<double>(cm.trace()) / static_cast<double>(cm.total()) == acc &&
                    accuracy(a, b) == acc && std::abs(r.weighted.recall - acc) <= 1e-12 &&
                    std::abs(oracle::micro_f1(a, b, k) - acc) <= 1e-12;
    ok_vectors += ok;
  }
  const auto hand = confusion({0, 0, 1, 2}, {0, 1, 1, 2}, 3);
  const bool hand_ok = hand.counts == std::vector<std::uint64_t>{1, 1, 0, 0, 1, 0, 0, 0, 1};
  ProbaMatrix uniform{1000, 10, std::vector<double>(10'000, 0.1)};
  LabelVector y(1000);
  for (auto& l : y) l = static_cast<std::int32_t>(rng.below(10));
  const double ll_err = std::abs(logloss(uniform, y) - std::numbers::ln10);
  report(5, "metrics identities", ok_vectors == kMetricVectors && hand_ok && ll_err <= kLogLossTolerance,
         fmt("%d/%d random vectors satisfy trace/total = accuracy = weighted recall = micro-F1; 3-class hand example %s; "
             "uniform log-loss |err| vs ln 10 = %.1e (limit %.0e)",
             ok_vectors, kMetricVectors, hand_ok ? "exact" : "WRONG", ll_err, kLogLossTolerance));
}

// --- AC6 ----------------------------------------------------------------------

std::size_t hits(double acc, std::size_t n) { return static_cast<std::size_t>(std::llround(acc * static_cast<double>(n))); }

void ac6_fixture() {
  const auto t0 = Clock::now();
  const auto cfg = cli::load_run_config(source_dir() / "configs/fixture.json");
  omp_set_num_threads(static_cast<int>(cfg.preprocess.workers));
  const auto table = synth_generate(*cfg.synth);
  const auto r =
      adversarial_training_pipeline(table, cfg.booster, cfg.surrogate, cfg.attack, cfg.split_seed, cfg.preprocess);
  const double secs = seconds_since(t0);

  const double base = r.baseline_clean.accuracy;
  const double base_adv = r.baseline_adv.accuracy;
  const double rob = r.robust_clean.accuracy;
  const double rob_adv = r.robust_adv.accuracy;
  const double s_drop = r.surrogate_clean_accuracy - r.surrogate_adv_accuracy;
  const bool a = base >= kBaselineCleanMin;
  const bool b = s_drop >= kSurrogateDropMin;
  const bool c = base - base_adv >= kBoosterDropMin;
  const bool d = rob_adv > base_adv && std::abs(rob - base) <= kCleanGapMax;

  const std::size_t n = r.test.y.size();
  const Golden got{hits(base, n), hits(base_adv, n), hits(rob, n), hits(rob_adv, n),
                   hits(r.surrogate_clean_accuracy, n), hits(r.surrogate_adv_accuracy, n)};
  const bool golden = std::memcmp(&got, &kFixtureGolden, sizeof got) == 0;

  report(6, "end-to-end pattern", a && b && c && d && golden && secs < kFixtureSeconds,
         fmt("%zu rows, %zu test; (a) baseline clean acc %.4f F1 %.4f [>= %.2f] %s; (b) surrogate %.4f -> %.4f drop "
             "%.4f [>= %.2f] %s; (c) baseline under FGSM %.4f F1 %.4f drop %.4f [>= %.2f] %s; (d) robust adv %.4f > "
             "%.4f, robust clean %.4f F1 %.4f gap %.4f [<= %.2f] %s; golden hit counts %s "
             "(%zu %zu %zu %zu %zu %zu); %.1f s (limit %.0f s)",
             table.n_rows(), n, base, r.baseline_clean.f1, kBaselineCleanMin, a ? "ok" : "NO",
             r.surrogate_clean_accuracy, r.surrogate_adv_accuracy, s_drop, kSurrogateDropMin, b ? "ok" : "NO",
             base_adv, r.baseline_adv.f1, base - base_adv, kBoosterDropMin, c ? "ok" : "NO", rob_adv, base_adv, rob,
             r.robust_clean.f1, base - rob, kCleanGapMax, d ? "ok" : "NO", golden ? "match" : "DIFFER",
             got.baseline_clean_hits, got.baseline_adv_hits, got.robust_clean_hits, got.robust_adv_hits,
             got.surrogate_clean_hits, got.surrogate_adv_hits, secs, kFixtureSeconds));
}

// --- AC7 ----------------------------------------------------------------------

nlohmann::json run_fixture_cli(const fs::path& out, std::size_t workers) {
  cli::Context ctx{cli::load_run_config(source_dir() / "configs/fixture.json"), out};
  ctx.cfg.preprocess.workers = workers;
  omp_set_num_threads(static_cast<int>(workers));
  fs::create_directories(out);
  cli::cmd_synth(ctx);
  cli::cmd_advtrain(ctx);
  cli::cmd_eval(ctx, {});
  omp_set_num_threads(1);
  std::ifstream in(out / "manifest.json");
  return nlohmann::json::parse(in);
}

void ac7_determinism() {
  testing::TempDir a("ac7a");
  testing::TempDir b("ac7b");
  const auto ma = run_fixture_cli(a.path(), 1);
  const auto mb = run_fixture_cli(b.path(), 2);
  std::size_t compared = 0;
  std::size_t differing = 0;
  std::string first;
  for (const char* cmd : {"synth", "adv-train", "eval"}) {
    const auto& oa = ma.at("commands").at(cmd).at("outputs");
    const auto& ob = mb.at("commands").at(cmd).at("outputs");
    for (const auto& [name, hash] : oa.items()) {
      ++compared;
      if (!ob.contains(name) || ob.at(name) != hash) {
        ++differing;
        if (first.empty()) first = name;
      }
    }
    differing += ob.size() != oa.size();
  }
  const bool models = ma["commands"]["adv-train"]["model_sha256"] == mb["commands"]["adv-train"]["model_sha256"];
  const auto& outs = ma["commands"]["adv-train"]["outputs"];
  report(7, "full determinism", differing == 0 && models && compared > 0,
         fmt("two fixture runs (1 and 2 workers): %zu artifacts compared, %zu differ%s%s; model hashes %s; "
             "baseline %.12s robust %.12s adv_test.csv %.12s",
             compared, differing, first.empty() ? "" : ", first: ", first.c_str(), models ? "equal" : "DIFFER",
             ma["commands"]["adv-train"]["model_sha256"]["baseline"].get<std::string>().c_str(),
             ma["commands"]["adv-train"]["model_sha256"]["robust"].get<std::string>().c_str(),
             outs["adv_test.csv"].get<std::string>().c_str()));
}

// --- AC8 ----------------------------------------------------------------------

// Runs in a child process so its peak RSS is measured on its own.
int scale_child(const fs::path& dir, const fs::path& result) {
  const auto t0 = Clock::now();
  SynthSpec spec;
  spec.n_rows = kScaleRows;
  spec.missing_rate = 0.01;
  spec.seed = 0xac8;
  const auto csv_path = dir / "scale.csv";
  {
    SynthGenerator gen(spec);
    std::ofstream out(csv_path, std::ios::binary);
    write_csv_header(gen.schema(), out);
    while (!gen.done()) append_csv_rows(gen.next_chunk(kScaleChunkRows), out);
  }
  const double gen_secs = seconds_since(t0);
  const auto bytes = fs::file_size(csv_path);
  const auto t1 = Clock::now();
  const auto pre = preprocess_csv_streaming(csv_path, spec.schema(), kScaleChunkRows, 1);
  const double pre_secs = seconds_since(t1);
  const auto t2 = Clock::now();
  Hyperparams hp;
  hp.n_classes = pre.stats.n_classes();
  hp.rounds = kScaleRounds;
  TrainLog log;
  const auto m = train(pre.data.X, pre.data.y, hp, &log);
  const double train_secs = seconds_since(t2);
  std::ofstream(result) << pre.data.y.size() << ' ' << m.n_rounds() << ' ' << bytes << ' ' << gen_secs << ' '
                        << pre_secs << ' ' << train_secs << ' ' << log.logloss.front() << ' ' << log.logloss.back()
                        << '\n';
  return 0;
}

void ac8_scale() {
  const auto t0 = Clock::now();
  testing::TempDir dir("ac8");
  const auto result = dir / "result.txt";
  const std::string self = fs::read_symlink("/proc/self/exe").string();
  std::vector<std::string> args{self, "--scale-child", dir.path().string(), result.string()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  if (posix_spawn(&pid, self.c_str(), nullptr, nullptr, argv.data(), environ) != 0) {
    report(8, "scale smoke test", false, "could not spawn the scale child");
    return;
  }
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  const double secs = seconds_since(t0);
  const long rss_mib = usage.ru_maxrss / 1024;
  std::size_t rows = 0, rounds = 0, bytes = 0;
  double gen = 0, pre = 0, tr = 0, ll0 = 0, ll1 = 0;
  std::ifstream(result) >> rows >> rounds >> bytes >> gen >> pre >> tr >> ll0 >> ll1;
  const bool exited = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  const bool ok = exited && rows == kScaleRows && rounds == kScaleRounds && rss_mib <= kScaleRssBudgetMiB &&
                  secs < kScaleSeconds && ll1 < ll0;
  report(8, "scale smoke test", ok,
         fmt("%zu-row CSV (%.0f MiB) streamed in %zu-row chunks, %zu rounds trained; peak RSS %ld MiB (budget %ld MiB); "
             "train log-loss %.4f -> %.4f; write %.1f s, preprocess %.1f s, train %.1f s, total %.1f s (limit %.0f s)",
             rows, static_cast<double>(bytes) / (1024.0 * 1024.0), kScaleChunkRows, rounds, rss_mib, kScaleRssBudgetMiB,
             ll0, ll1, gen, pre, tr, secs, kScaleSeconds));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 4 && std::strcmp(argv[1], "--scale-child") == 0) return scale_child(argv[2], argv[3]);
  omp_set_num_threads(1);
  const std::vector<std::pair<int, std::function<void()>>> criteria{
      {1, ac1_oracle}, {2, ac2_gradients}, {3, ac3_fgsm},    {4, ac4_parallel_transform},
      {5, ac5_metrics}, {6, ac6_fixture},  {7, ac7_determinism}, {8, ac8_scale}};
  const int only = argc == 2 ? std::atoi(argv[1]) : 0;
  for (const auto& [id, run] : criteria) {
    if (only != 0 && only != id) continue;
    try {
      run();
    } catch (const std::exception& e) {
      report(id, "criterion", false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
