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

#include "advids/cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "advids/error.hpp"

namespace advids::cli {

using nlohmann::json;

bool RunConfig::wants(std::string_view format) const {
  return std::find(report_formats.begin(), report_formats.end(), format) != report_formats.end();
}

namespace {

// Collects problems for one JSON object so a bad config reports every field.
class Section {
 public:
  Section(const json& parent, std::string name, std::vector<std::string>& problems, bool required)
      : path_(std::move(name)), problems_(problems) {
    if (!parent.contains(path_)) {
      if (required) problems_.push_back(path_ + ": required section missing");
      return;
    }
    const auto& obj = parent.at(path_);
    if (!obj.is_object()) {
      problems_.push_back(path_ + ": must be an object");
      return;
    }
    obj_ = &obj;
  }

  Section(const json& root, std::vector<std::string>& problems) : problems_(problems), obj_(&root) {}

  bool present() const { return obj_ != nullptr; }
  bool has(const char* key) const { return obj_ && obj_->contains(key); }
  const json& raw(const char* key) const { return obj_->at(key); }

  template <class T>
  bool read(const char* key, T& out, bool required = false) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) {
      if (required) bad(key, "required");
      return false;
    }
    const auto& v = obj_->at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw std::invalid_argument("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("");
      }
      out = v.get<T>();
      return true;
    } catch (const std::exception&) {
      bad(key, std::string("expected ") + expected<T>());
      return false;
    }
  }

  void mark(const char* key) { seen_.insert(key); }

  void check(bool ok, const char* key, const std::string& msg) {
    if (!ok) bad(key, msg);
  }

  void bad(const std::string& key, const std::string& msg) {
    problems_.push_back((path_.empty() ? key : path_ + "." + key) + ": " + msg);
  }

  void reject_unknown() {
    if (!obj_) return;
    for (const auto& [k, _] : obj_->items()) {
      if (!seen_.count(k)) bad(k, "unknown field");
    }
  }

 private:
  template <class T>
  static const char* expected() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_unsigned_v<T>) return "a nonnegative integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list";
  }

  std::string path_;
  std::vector<std::string>& problems_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

bool finite(double v) { return std::isfinite(v); }

void parse_data(const json& doc, const std::filesystem::path& base, RunConfig& c,
                std::vector<std::string>& problems) {
  Section s(doc, "data", problems, true);
  std::string input;
  if (s.read("input_csv", input)) {
    c.input_csv = base / input;
    std::error_code ec;
    s.check(std::filesystem::is_regular_file(*c.input_csv, ec), "input_csv",
            "file not found: " + c.input_csv->string());
  }
  s.mark("synth");
  if (s.has("synth")) {
    const json& raw = s.raw("synth");
    if (!raw.is_object()) s.bad("synth", "must be an object");
    SynthSpec spec;
    std::vector<std::string> local;
    const json empty = json::object();
    Section ys(raw.is_object() ? raw : empty, local);
    ys.read("n_rows", spec.n_rows, true);
    ys.read("seed", spec.seed, true);
    ys.read("n_numeric", spec.n_numeric);
    ys.read("n_categorical", spec.n_categorical);
    const bool named = ys.read("class_names", spec.class_names);
    if (!ys.read("class_priors", spec.class_priors) && named) {
      spec.class_priors.assign(spec.class_names.size(),
                               spec.class_names.empty() ? 0.0 : 1.0 / static_cast<double>(spec.class_names.size()));
    }
    ys.read("missing_rate", spec.missing_rate);
    ys.read("separation", spec.separation);
    ys.read("n_categories", spec.n_categories);
    ys.reject_unknown();
    for (auto& p : local) problems.push_back("data.synth." + p);
    if (local.empty()) {
      try {
        spec.validate();
      } catch (const Error& e) {
        problems.push_back(std::string("data.") + e.what());
      }
    }
    c.synth = spec;
  }
  s.reject_unknown();
  if (s.present() && !c.input_csv && !c.synth) {
    s.bad("input_csv", "one of data.input_csv or data.synth is required");
  }
}

void parse_schema(const json& doc, RunConfig& c, std::vector<std::string>& problems) {
  if (!doc.contains("schema")) {
    if (c.synth) {
      c.schema = c.synth->schema();
    } else {
      problems.push_back("schema: required when data.input_csv is used");
    }
    return;
  }
  try {
    c.schema = doc.at("schema").get<FlowSchema>();
    c.schema.validate();
  } catch (const std::exception& e) {
    problems.push_back(std::string("schema: ") + e.what());
  }
}

void parse_preprocess(const json& doc, RunConfig& c, std::vector<std::string>& problems) {
  Section s(doc, "preprocess", problems, true);
  auto& p = c.preprocess;
  s.read("split_seed", c.split_seed, true);
  if (s.read("train_fraction", p.train_fraction)) {
    s.check(p.train_fraction > 0.0 && p.train_fraction < 1.0, "train_fraction", "must lie in (0, 1)");
  }
  s.read("stratified", p.stratified);
  s.read("fit_on_train_only", p.fit_on_train_only);
  if (s.read("chunk_rows", p.chunk_rows)) s.check(p.chunk_rows >= 1, "chunk_rows", "must be >= 1");
  if (s.read("workers", p.workers)) s.check(p.workers >= 1, "workers", "must be >= 1");
  s.reject_unknown();
}

void parse_booster(const json& doc, RunConfig& c, std::vector<std::string>& problems) {
  Section s(doc, "booster", problems, false);
  auto& h = c.booster;
  if (s.read("max_depth", h.max_depth)) s.check(h.max_depth >= 1, "max_depth", "must be >= 1");
  if (s.read("learning_rate", h.learning_rate)) {
    s.check(h.learning_rate >= 0.0 && h.learning_rate <= 1.0, "learning_rate", "must lie in [0, 1]");
  }
  s.read("rounds", h.rounds);
  if (s.read("reg_lambda", h.reg_lambda)) {
    s.check(h.reg_lambda >= 0.0 && finite(h.reg_lambda), "reg_lambda", "must be finite and >= 0");
  }
  if (s.read("min_split_gain", h.min_split_gain)) {
    s.check(h.min_split_gain >= 0.0, "min_split_gain", "must be >= 0");
  }
  if (s.read("min_child_weight", h.min_child_weight)) {
    s.check(h.min_child_weight >= 0.0, "min_child_weight", "must be >= 0");
  }
  if (s.read("n_bins", h.n_bins)) {
    s.check(h.n_bins >= 2 && h.n_bins <= 65536, "n_bins", "must lie in [2, 65536]");
  }
  if (s.read("n_classes", h.n_classes)) s.check(h.n_classes >= 2, "n_classes", "must be >= 2");
  s.reject_unknown();
}

void parse_surrogate(const json& doc, RunConfig& c, std::vector<std::string>& problems) {
  Section s(doc, "surrogate", problems, true);
  auto& g = c.surrogate;
  s.read("seed", g.seed, true);
  if (s.read("epochs", g.epochs)) s.check(g.epochs >= 1, "epochs", "must be >= 1");
  if (s.read("step_size", g.step_size)) {
    s.check(g.step_size >= 0.0 && finite(g.step_size), "step_size", "must be finite and >= 0");
  }
  if (s.read("l2", g.l2)) s.check(g.l2 >= 0.0 && finite(g.l2), "l2", "must be finite and >= 0");
  if (s.read("batch_size", g.batch_size)) s.check(g.batch_size >= 1, "batch_size", "must be >= 1");
  s.reject_unknown();
}

void parse_attack(const json& doc, RunConfig& c, std::vector<std::string>& problems) {
  Section s(doc, "attack", problems, false);
  auto& a = c.attack;
  if (s.read("epsilon", a.epsilon)) {
    s.check(a.epsilon >= 0.0 && finite(a.epsilon), "epsilon", "must be finite and >= 0");
  }
  const bool lo = s.read("clip_min", a.clip_min);
  const bool hi = s.read("clip_max", a.clip_max);
  if (lo || hi) s.check(a.clip_min <= a.clip_max, "clip_max", "must be >= clip_min");
  s.mark("perturb_mask");
  if (s.has("perturb_mask") && !s.raw("perturb_mask").is_null()) {
    try {
      a.perturb_mask = s.raw("perturb_mask").get<std::vector<bool>>();
    } catch (const std::exception&) {
      s.bad("perturb_mask", "expected null or a list of booleans");
    }
    const auto d = c.schema.feature_columns.size();
    if (d > 0) {
      s.check(a.perturb_mask.size() == d, "perturb_mask",
              "length " + std::to_string(a.perturb_mask.size()) + " differs from " + std::to_string(d) +
                  " features");
    }
  }
  s.read("numeric_only", c.numeric_only);
  s.check(!(c.numeric_only && !a.perturb_mask.empty()), "numeric_only",
          "cannot be combined with perturb_mask");
  if (s.read("attack_fraction", c.preprocess.attack_fraction)) {
    s.check(c.preprocess.attack_fraction >= 0.0 && c.preprocess.attack_fraction <= 1.0,
            "attack_fraction", "must lie in [0, 1]");
  }
  s.reject_unknown();
}

void parse_sweep_and_report(const json& doc, RunConfig& c, std::vector<std::string>& problems) {
  Section s(doc, "sweep", problems, false);
  if (s.read("epsilons", c.sweep_epsilons)) {
    s.check(!c.sweep_epsilons.empty(), "epsilons", "must not be empty");
    for (double e : c.sweep_epsilons) {
      if (!(e >= 0.0 && finite(e))) {
        s.bad("epsilons", "entries must be finite and >= 0");
        break;
      }
    }
  }
  s.reject_unknown();

  Section r(doc, "report", problems, false);
  if (r.read("formats", c.report_formats)) {
    for (const auto& f : c.report_formats) {
      if (f != "json" && f != "text" && f != "csv") r.bad("formats", "unknown format '" + f + "'");
    }
  }
  r.read("importance_top", c.importance_top);
  r.reject_unknown();
}

}  // namespace

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  require(doc.is_object(), ErrorCategory::config, "config must be a JSON object");
  RunConfig c;
  c.source = doc;
  std::vector<std::string> problems;
  parse_data(doc, base_dir, c, problems);
  parse_schema(doc, c, problems);
  parse_preprocess(doc, c, problems);
  parse_booster(doc, c, problems);
  parse_surrogate(doc, c, problems);
  parse_attack(doc, c, problems);
  parse_sweep_and_report(doc, c, problems);

  Section top(doc, problems);
  for (const char* k : {"data", "schema", "preprocess", "booster", "surrogate", "attack", "sweep", "report"}) {
    top.mark(k);
  }
  top.reject_unknown();

  if (!problems.empty()) {
    std::string msg = std::to_string(problems.size()) + " invalid field(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    fail(ErrorCategory::config, msg);
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCategory::config, path.string() + ": " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

}  // namespace advids::cli
