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

#include <cmath>
#include <cstring>
#include <limits>

#include "advids/attack.hpp"
#include "advids/rng.hpp"
#include "support/test_util.hpp"

using namespace advids;
using advids::testing::error_category;

namespace {

struct Case {
  FeatureMatrix X;
  LabelVector y;
  SurrogateParams p;
};

Case random_case(std::size_t n, std::size_t d, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  for (std::size_t j = 0; j < d; ++j) {
    names.push_back("f" + std::to_string(j));
    kinds.push_back(j % 4 == 3 ? ColumnKind::categorical : ColumnKind::numeric);
  }
  Case c{FeatureMatrix(n, names, kinds), LabelVector(n), SurrogateParams::zeros(d, k)};
  for (auto& v : c.X.values()) v = rng.uniform();
  for (auto& l : c.y) l = static_cast<std::int32_t>(rng.below(k));
  for (auto& w : c.p.weights) w = rng.normal();
  for (auto& b : c.p.bias) b = rng.normal();
  return c;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("epsilon zero is a bit-exact identity") {
  auto c = random_case(300, 12, 5, 1);
  c.X.at(0, 0) = -0.0;
  AttackConfig cfg;
  cfg.epsilon = 0.0;
  const auto adv = fgsm_batch(c.p, c.X, c.y, cfg);
  CHECK(bit_equal(adv, c.X));
}

TEST_CASE("unclipped step is exactly epsilon times the gradient sign") {
  const auto c = random_case(400, 10, 4, 2);
  AttackConfig cfg;
  cfg.epsilon = 0.1;
  cfg.clip_min = -kInf;
  cfg.clip_max = kInf;
  const auto adv = fgsm_batch(c.p, c.X, c.y, cfg);
  const auto signs = gradient_signs(c.p, c.X, c.y);
  for (std::size_t i = 0; i < c.X.n_rows(); ++i) {
    const auto g = input_gradient(c.p, c.X.row(i), c.y[i]);
    for (std::size_t j = 0; j < c.X.n_cols(); ++j) {
      const int s = signs[i * c.X.n_cols() + j];
      CHECK(s == (g[j] > 0) - (g[j] < 0));
      CHECK(adv.at(i, j) == c.X.at(i, j) + cfg.epsilon * s);
    }
  }
}

TEST_CASE("an unclipped step never lowers the surrogate loss") {
  // The loss is convex in x, so L(x + d) >= L(x) + g.d = L(x) + eps |g|_1.
  const auto c = random_case(500, 8, 6, 3);
  AttackConfig cfg;
  cfg.epsilon = 0.05;
  cfg.clip_min = -kInf;
  cfg.clip_max = kInf;
  const auto adv = fgsm_batch(c.p, c.X, c.y, cfg);
  for (std::size_t i = 0; i < c.X.n_rows(); ++i) {
    const auto g = input_gradient(c.p, c.X.row(i), c.y[i]);
    double l1 = 0.0;
    for (double v : g) l1 += std::abs(v);
    const double before = surrogate_loss(c.p, c.X.row(i), c.y[i]);
    CHECK(surrogate_loss(c.p, adv.row(i), c.y[i]) >= before + cfg.epsilon * l1 - 1e-12);
  }
}

TEST_CASE("clipped output stays in range and mask holds columns fixed") {
  const auto c = random_case(300, 8, 3, 4);
  AttackConfig cfg;
  cfg.epsilon = 0.4;
  cfg.perturb_mask = numeric_only_mask(c.X);
  CHECK(cfg.perturb_mask == std::vector<bool>{true, true, true, false, true, true, true, false});
  const auto adv = fgsm_batch(c.p, c.X, c.y, cfg);
  for (std::size_t i = 0; i < adv.n_rows(); ++i) {
    for (std::size_t j = 0; j < adv.n_cols(); ++j) {
      CHECK(adv.at(i, j) >= 0.0);
      CHECK(adv.at(i, j) <= 1.0);
      if (!cfg.perturbs(j)) CHECK(adv.at(i, j) == c.X.at(i, j));
    }
  }
}

TEST_CASE("attack config validation and JSON") {
  const auto c = random_case(4, 3, 2, 5);
  AttackConfig cfg;
  cfg.epsilon = -0.1;
  CHECK(error_category([&] { fgsm_batch(c.p, c.X, c.y, cfg); }) == "invalid-argument");
  cfg = {};
  cfg.clip_min = 1.0;
  cfg.clip_max = 0.0;
  CHECK(error_category([&] { cfg.validate(3); }) == "invalid-argument");
  cfg = {};
  cfg.perturb_mask = {true};
  CHECK(error_category([&] { cfg.validate(3); }) == "invalid-argument");
  cfg = {};
  auto X = c.X;
  X.at(0, 0) = 1.5;
  CHECK(error_category([&] { fgsm_batch(c.p, X, c.y, cfg); }) == "invalid-argument");

  nlohmann::json j = AttackConfig{};
  CHECK(j.at("perturb_mask").is_null());
  AttackConfig m;
  m.perturb_mask = {true, false, true};
  j = m;
  CHECK(j.get<AttackConfig>().perturb_mask == m.perturb_mask);
}

TEST_CASE("epsilon sweep starts at clean accuracy") {
  auto c = random_case(400, 6, 3, 6);
  for (std::size_t i = 0; i < c.y.size(); ++i) c.y[i] = c.X.at(i, 0) > 0.5 ? 1 : 0;
  SurrogateTrainCfg scfg;
  scfg.seed = 1;
  scfg.step_size = 1.0;
  const auto p = train_surrogate(c.X, c.y, 3, scfg);
  Hyperparams hp;
  hp.n_classes = 3;
  hp.rounds = 10;
  const auto m = train(c.X, c.y, hp);
  const std::vector<double> eps{0.0, 0.1, 0.3};
  const auto pts = epsilon_sweep(p, m, c.X, c.y, eps);
  REQUIRE(pts.size() == 3);
  const auto sp = surrogate_predict(p, c.X);
  const auto bp = predict_class(m, c.X);
  double sa = 0, ba = 0;
  for (std::size_t i = 0; i < c.y.size(); ++i) {
    sa += sp[i] == c.y[i];
    ba += bp[i] == c.y[i];
  }
  CHECK(pts[0].surrogate_accuracy == sa / 400.0);
  CHECK(pts[0].ensemble_accuracy == ba / 400.0);
  CHECK(pts[2].surrogate_accuracy < pts[0].surrogate_accuracy);
  CHECK(pts[1].epsilon == 0.1);
}
