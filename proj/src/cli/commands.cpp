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

#include "advids/cli/commands.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "advids/advtrain.hpp"
#include "advids/error.hpp"
#include "advids/feature_io.hpp"
#include "advids/hash.hpp"
#include "advids/metrics.hpp"

namespace advids::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCategory::io, "write failed: " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCategory::io,
          "cannot open " + path.string() + " (run the producing command first)");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCategory::io, path.string() + ": " + e.what());
  }
}

// Inputs and outputs of one command, keyed by path relative to the output
// directory when the file lives there.
class Fragment {
 public:
  explicit Fragment(const Context& ctx) : ctx_(ctx) {}

  void input(const fs::path& p) { doc_["inputs"][key(p)] = sha256_file(p); }
  void output(const fs::path& p) { doc_["outputs"][key(p)] = sha256_file(p); }
  json& operator[](const char* k) { return doc_[k]; }

  void record(const std::string& command) const {
    const auto path = ctx_.out_dir / "manifest.json";
    json m = fs::exists(path) ? read_json(path) : json::object();
    m["format"] = "advids.manifest";
    m["version"] = 1;
    m["config"] = ctx_.cfg.source;
    m["config_sha256"] = sha256_hex(ctx_.cfg.source.dump());
    m["commands"][command] = doc_;
    write_json(path, m);
  }

 private:
  std::string key(const fs::path& p) const {
    const auto rel = p.lexically_relative(ctx_.out_dir);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return p.generic_string();
  }

  const Context& ctx_;
  json doc_ = json::object();
};

fs::path data_path(const Context& ctx) {
  return ctx.cfg.input_csv ? *ctx.cfg.input_csv : ctx.out_dir / "data.csv";
}

fs::path out(const Context& ctx, const std::string& name) { return ctx.out_dir / name; }

PreprocessStats load_stats(const Context& ctx) { return read_json(out(ctx, "stats.json")).get<PreprocessStats>(); }

Ensemble load_model(const fs::path& p) { return Ensemble::from_json(read_json(p)); }

SurrogateParams load_surrogate(const fs::path& p) { return read_json(p).get<SurrogateParams>(); }

Hyperparams booster_params(const Context& ctx, const PreprocessStats& stats) {
  Hyperparams hp = ctx.cfg.booster;
  if (hp.n_classes == 0) hp.n_classes = stats.n_classes();
  require(hp.n_classes == stats.n_classes(), ErrorCategory::config,
          "booster.n_classes is " + std::to_string(hp.n_classes) + " but the data has " +
              std::to_string(stats.n_classes()) + " labels");
  return hp;
}

AttackConfig attack_params(const Context& ctx, std::span<const ColumnKind> kinds) {
  AttackConfig a = ctx.cfg.attack;
  if (ctx.cfg.numeric_only) {
    a.perturb_mask.clear();
    for (auto k : kinds) a.perturb_mask.push_back(k == ColumnKind::numeric);
  }
  a.validate(kinds.size());
  return a;
}

void write_model(const fs::path& p, const Ensemble& m) { write_json(p, m.to_json()); }

void write_sidecar(const fs::path& csv_path, const fs::path& source,
                   const fs::path& surrogate, const AttackConfig& a, std::size_t n_rows) {
  AttackSidecar side{a, sha256_file(source), sha256_file(surrogate), sha256_file(csv_path), n_rows};
  auto side_path = csv_path;
  side_path.replace_extension(".json");
  write_json(side_path, side);
}

json pair_json(const ModelEval& e) { return {{"accuracy", e.accuracy}, {"f1_weighted", e.f1}}; }

void write_reports(const Context& ctx, const std::string& tag, const ModelEval& e) {
  if (ctx.cfg.wants("json")) write_json(out(ctx, "report_" + tag + ".json"), e);
  if (ctx.cfg.wants("text")) write_text(out(ctx, "report_" + tag + ".txt"), format_report(e.report));
  if (ctx.cfg.wants("csv")) write_text(out(ctx, "confusion_" + tag + ".csv"), confusion_csv(e.confusion));
}

void record_reports(Fragment& f, const Context& ctx, const std::string& tag) {
  for (const auto& name : {"report_" + tag + ".json", "report_" + tag + ".txt", "confusion_" + tag + ".csv"}) {
    if (fs::exists(out(ctx, name))) f.output(out(ctx, name));
  }
}

}  // namespace

void cmd_synth(const Context& ctx) {
  require(ctx.cfg.synth.has_value(), ErrorCategory::config, "synth: config has no data.synth section");
  const auto path = out(ctx, "data.csv");
  SynthGenerator gen(*ctx.cfg.synth);
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCategory::io, "cannot open " + path.string() + " for writing");
  write_csv_header(gen.schema(), os);
  while (!gen.done()) append_csv_rows(gen.next_chunk(ctx.cfg.preprocess.chunk_rows), os);
  os.close();
  require(static_cast<bool>(os), ErrorCategory::io, "write failed: " + path.string());

  Fragment f(ctx);
  f["synth"] = *ctx.cfg.synth;
  f.output(path);
  f.record("synth");
}

void cmd_preprocess(const Context& ctx) {
  const auto src = data_path(ctx);
  const FlowTable table = load_csv(src, ctx.cfg.schema);
  const auto d = prepare_data(table, ctx.cfg.preprocess, ctx.cfg.split_seed);
  write_json(out(ctx, "stats.json"), d.stats);
  write_json(out(ctx, "split.json"), d.split);
  write_features(d.train, out(ctx, "train.csv"));
  write_features(d.test, out(ctx, "test.csv"));

  Fragment f(ctx);
  f.input(src);
  for (const char* name : {"stats.json", "split.json", "train.csv", "test.csv"}) f.output(out(ctx, name));
  f["split_seed"] = ctx.cfg.split_seed;
  f["n_train"] = d.train.y.size();
  f["n_test"] = d.test.y.size();
  f.record("preprocess");
}

void cmd_train(const Context& ctx, const TrainArgs& args) {
  const auto stats = load_stats(ctx);
  const auto hp = booster_params(ctx, stats);
  const auto train_path = out(ctx, "train.csv");
  const Dataset clean = read_features(train_path, stats);
  Fragment f(ctx);
  f.input(out(ctx, "stats.json"));
  f.input(train_path);
  f["booster"] = hp;

  TrainLog log;
  if (args.adversarial) {
    const auto adv_path = args.adversarial->is_absolute() ? *args.adversarial : ctx.out_dir / *args.adversarial;
    const Dataset adv = read_features(adv_path, stats);
    const auto combined = augment(clean.X, clean.y, adv.X, adv.y);
    const auto robust = train(combined.X, combined.y, hp, &log);
    write_model(out(ctx, "robust.json"), robust);
    f.input(adv_path);
    f.output(out(ctx, "robust.json"));
    f["model_sha256"] = robust.content_hash();
    f["n_rows"] = combined.y.size();
    f["final_train_logloss"] = log.logloss.empty() ? json(nullptr) : json(log.logloss.back());
    f.record("train-robust");
    return;
  }

  const auto baseline = train(clean.X, clean.y, hp, &log);
  write_model(out(ctx, "baseline.json"), baseline);
  SurrogateTrainLog slog;
  const auto surrogate = train_surrogate(clean.X, clean.y, hp.n_classes, ctx.cfg.surrogate, &slog);
  write_json(out(ctx, "surrogate.json"), surrogate);
  f.output(out(ctx, "baseline.json"));
  f.output(out(ctx, "surrogate.json"));
  f["surrogate"] = ctx.cfg.surrogate;
  f["model_sha256"] = baseline.content_hash();
  f["surrogate_sha256"] = surrogate.content_hash();
  f["final_train_logloss"] = log.logloss.empty() ? json(nullptr) : json(log.logloss.back());
  f["surrogate_objective"] = slog.objective.back();
  f.record("train");
}

void cmd_attack(const Context& ctx, const AttackArgs& args) {
  const auto stats = load_stats(ctx);
  const auto src = args.input.is_absolute() ? args.input : ctx.out_dir / args.input;
  const auto surrogate_path = out(ctx, "surrogate.json");
  const Dataset clean = read_features(src, stats);
  const auto surrogate = load_surrogate(surrogate_path);
  auto a = attack_params(ctx, stats.feature_kinds());
  if (args.epsilon) a.epsilon = *args.epsilon;
  a.validate(stats.n_features());

  const std::string stem = args.output.value_or("adv_" + src.stem().string());
  const auto dst = out(ctx, stem + ".csv");
  write_features({fgsm_batch(surrogate, clean.X, clean.y, a), clean.y}, dst);
  write_sidecar(dst, src, surrogate_path, a, clean.y.size());

  Fragment f(ctx);
  f.input(src);
  f.input(surrogate_path);
  f.output(dst);
  f.output(out(ctx, stem + ".json"));
  f["attack"] = a;
  f.record("attack:" + stem);
}

void cmd_advtrain(const Context& ctx) {
  const auto src = data_path(ctx);
  const FlowTable table = load_csv(src, ctx.cfg.schema);
  const auto& cfg = ctx.cfg;
  AttackConfig a = cfg.attack;
  if (cfg.numeric_only) {
    a.perturb_mask.clear();
    for (const auto& c : cfg.schema.feature_columns) a.perturb_mask.push_back(c.kind == ColumnKind::numeric);
  }
  const auto r = adversarial_training_pipeline(table, cfg.booster, cfg.surrogate, a, cfg.split_seed, cfg.preprocess);

  write_json(out(ctx, "stats.json"), r.stats);
  write_json(out(ctx, "split.json"), r.split);
  write_features(r.train, out(ctx, "train.csv"));
  write_features(r.test, out(ctx, "test.csv"));
  write_json(out(ctx, "surrogate.json"), r.surrogate);
  write_model(out(ctx, "baseline.json"), r.baseline);
  write_model(out(ctx, "robust.json"), r.robust);
  write_features(r.adv_train, out(ctx, "adv_train.csv"));
  write_features(r.adv_test, out(ctx, "adv_test.csv"));
  write_sidecar(out(ctx, "adv_train.csv"), out(ctx, "train.csv"), out(ctx, "surrogate.json"), a,
                r.adv_train.y.size());
  write_sidecar(out(ctx, "adv_test.csv"), out(ctx, "test.csv"), out(ctx, "surrogate.json"), a,
                r.adv_test.y.size());

  json metrics = {
      {"baseline_clean", pair_json(r.baseline_clean)},
      {"baseline_adversarial", pair_json(r.baseline_adv)},
      {"robust_clean", pair_json(r.robust_clean)},
      {"robust_adversarial", pair_json(r.robust_adv)},
      {"surrogate_clean_accuracy", r.surrogate_clean_accuracy},
      {"surrogate_adversarial_accuracy", r.surrogate_adv_accuracy},
  };
  json matrices = {{"baseline_clean", r.baseline_clean.confusion},
                   {"baseline_adversarial", r.baseline_adv.confusion},
                   {"robust_clean", r.robust_clean.confusion},
                   {"robust_adversarial", r.robust_adv.confusion}};
  write_json(out(ctx, "metrics.json"), {{"metrics", metrics}, {"confusion", matrices}});

  Fragment f(ctx);
  f.input(src);
  for (const char* name : {"stats.json", "split.json", "train.csv", "test.csv", "surrogate.json",
                           "baseline.json", "robust.json", "adv_train.csv", "adv_train.json",
                           "adv_test.csv", "adv_test.json", "metrics.json"}) {
    f.output(out(ctx, name));
  }
  f["seeds"] = {{"split_seed", cfg.split_seed}, {"surrogate_seed", cfg.surrogate.seed}};
  f["model_sha256"] = {{"baseline", r.baseline.content_hash()},
                       {"robust", r.robust.content_hash()},
                       {"surrogate", r.surrogate.content_hash()}};
  f["metrics"] = metrics;
  f["confusion"] = matrices;
  f.record("adv-train");
}

void cmd_eval(const Context& ctx, const EvalArgs& args) {
  const auto stats = load_stats(ctx);
  auto models = args.models;
  if (models.empty()) {
    for (const char* m : {"baseline", "robust"}) {
      if (fs::exists(out(ctx, std::string(m) + ".json"))) models.emplace_back(m);
    }
  }
  auto sets = args.sets;
  if (sets.empty()) {
    for (const char* s : {"test", "adv_test"}) {
      if (fs::exists(out(ctx, std::string(s) + ".csv"))) sets.emplace_back(s);
    }
  }
  require(!models.empty(), ErrorCategory::io, "eval: no model found (run train or adv-train first)");
  require(!sets.empty(), ErrorCategory::io, "eval: no feature set found (run preprocess first)");

  Fragment f(ctx);
  f.input(out(ctx, "stats.json"));
  json summary = json::object();
  const auto names = stats.labels();
  const auto feature_names = stats.feature_names();
  for (const auto& m : models) {
    const auto model_path = out(ctx, m + ".json");
    const auto model = load_model(model_path);
    f.input(model_path);

    json top = json::array();
    std::ostringstream txt;
    txt << "Rank Feature                  Gain\n";
    const auto imp = feature_importance(model);
    for (std::size_t i = 0; i < imp.size() && i < ctx.cfg.importance_top; ++i) {
      top.push_back({{"feature", feature_names[imp[i].feature]}, {"gain", imp[i].gain}});
      char line[160];
      std::snprintf(line, sizeof line, "%4zu %-16s %12.6g\n", i + 1, feature_names[imp[i].feature].c_str(),
                    imp[i].gain);
      txt << line;
    }
    write_json(out(ctx, "importance_" + m + ".json"), top);
    write_text(out(ctx, "importance_" + m + ".txt"), txt.str());
    f.output(out(ctx, "importance_" + m + ".json"));
    f.output(out(ctx, "importance_" + m + ".txt"));

    for (const auto& s : sets) {
      const auto set_path = out(ctx, s + ".csv");
      const auto data = read_features(set_path, stats);
      f.input(set_path);
      const auto e = evaluate(model, data, names);
      const auto tag = m + "_" + s;
      write_reports(ctx, tag, e);
      record_reports(f, ctx, tag);
      summary[m][s] = pair_json(e);
    }
  }
  write_json(out(ctx, "eval.json"), summary);
  f.output(out(ctx, "eval.json"));
  f["metrics"] = summary;
  f.record("eval");
}

void cmd_sweep(const Context& ctx) {
  const auto stats = load_stats(ctx);
  const auto test_path = out(ctx, "test.csv");
  const auto data = read_features(test_path, stats);
  const auto surrogate = load_surrogate(out(ctx, "surrogate.json"));
  const auto baseline = load_model(out(ctx, "baseline.json"));
  const bool has_robust = fs::exists(out(ctx, "robust.json"));
  const auto base = attack_params(ctx, stats.feature_kinds());
  const auto& eps = ctx.cfg.sweep_epsilons;

  const auto points = epsilon_sweep(surrogate, baseline, data.X, data.y, eps, base);
  std::vector<SweepPoint> robust_points;
  if (has_robust) robust_points = epsilon_sweep(surrogate, load_model(out(ctx, "robust.json")), data.X, data.y, eps, base);

  json rows = json::array();
  std::ostringstream txt;
  txt << (has_robust ? " Epsilon  Surrogate   Booster    Robust\n" : " Epsilon  Surrogate   Booster\n");
  for (std::size_t i = 0; i < points.size(); ++i) {
    json row = {{"epsilon", points[i].epsilon},
                {"surrogate_accuracy", points[i].surrogate_accuracy},
                {"booster_accuracy", points[i].ensemble_accuracy}};
    char line[128];
    std::snprintf(line, sizeof line, "%8.4f %10.4f %9.4f", points[i].epsilon, points[i].surrogate_accuracy,
                  points[i].ensemble_accuracy);
    txt << line;
    if (has_robust) {
      row["robust_accuracy"] = robust_points[i].ensemble_accuracy;
      std::snprintf(line, sizeof line, " %9.4f", robust_points[i].ensemble_accuracy);
      txt << line;
    }
    txt << '\n';
    rows.push_back(std::move(row));
  }
  write_json(out(ctx, "sweep.json"), rows);
  write_text(out(ctx, "sweep.txt"), txt.str());

  Fragment f(ctx);
  f.input(out(ctx, "stats.json"));
  f.input(test_path);
  f.input(out(ctx, "surrogate.json"));
  f.input(out(ctx, "baseline.json"));
  if (has_robust) f.input(out(ctx, "robust.json"));
  f.output(out(ctx, "sweep.json"));
  f.output(out(ctx, "sweep.txt"));
  f["attack"] = base;
  f["epsilons"] = eps;
  f.record("sweep");
}

namespace {

int report_error(std::string_view category, const std::string& message) {
  std::cerr << "error category=" << category << " message=" << json(message).dump() << '\n';
  return category == "config" ? 2 : 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Adversarially robust flow-based intrusion detection pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::size_t workers = 0;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required();
  app.add_option("--out", out_dir, "Artifact directory")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (overrides preprocess.workers)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{4096}));

  TrainArgs train_args;
  AttackArgs attack_args;
  EvalArgs eval_args;
  std::string adversarial, attack_input, attack_output;
  double epsilon = 0.0;

  auto* synth = app.add_subcommand("synth", "Generate the synthetic flow CSV");
  auto* pre = app.add_subcommand("preprocess", "Fit scaling and encoding, split, write feature CSVs");
  auto* tr = app.add_subcommand("train", "Train the booster and the surrogate on train.csv");
  auto* adv_opt = tr->add_option("--adversarial", adversarial,
                                 "Adversarial feature CSV to add; trains robust.json instead");
  auto* at = app.add_subcommand("attack", "FGSM a feature CSV with the surrogate");
  at->add_option("--input", attack_input, "Feature CSV to perturb")->default_str("test.csv");
  auto* at_out = at->add_option("--output", attack_output, "Output stem");
  auto* at_eps = at->add_option("--epsilon", epsilon, "Override attack.epsilon");
  auto* adv = app.add_subcommand("adv-train", "Run the full adversarial training pipeline");
  auto* ev = app.add_subcommand("eval", "Write reports for every model and feature set");
  ev->add_option("--model", eval_args.models, "Model stem(s), e.g. baseline");
  ev->add_option("--set", eval_args.sets, "Feature set stem(s), e.g. adv_test");
  auto* sw = app.add_subcommand("sweep", "Accuracy against FGSM over a range of epsilons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", e.what());
  }

  try {
    Context ctx{load_run_config(config_path), out_dir};
    if (workers > 0) ctx.cfg.preprocess.workers = workers;
    omp_set_num_threads(static_cast<int>(ctx.cfg.preprocess.workers));
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    require(!ec, ErrorCategory::io, "cannot create " + out_dir + ": " + ec.message());

    if (*synth) cmd_synth(ctx);
    if (*pre) cmd_preprocess(ctx);
    if (*tr) {
      if (*adv_opt) train_args.adversarial = adversarial;
      cmd_train(ctx, train_args);
    }
    if (*at) {
      if (!attack_input.empty()) attack_args.input = attack_input;
      if (*at_out) attack_args.output = attack_output;
      if (*at_eps) attack_args.epsilon = epsilon;
      cmd_attack(ctx, attack_args);
    }
    if (*adv) cmd_advtrain(ctx);
    if (*ev) cmd_eval(ctx, eval_args);
    if (*sw) cmd_sweep(ctx);
  } catch (const Error& e) {
    return report_error(category_name(e.category()), e.what());
  } catch (const json::exception& e) {
    return report_error("io", e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return 0;
}

}  // namespace advids::cli
