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
#include <numeric>
#include <sstream>

#include "advids/csv.hpp"
#include "advids/flowdata.hpp"
#include "support/test_util.hpp"

using namespace advids;
using advids::testing::error_category;
using advids::testing::TempDir;
using advids::testing::write_file;

namespace {

FlowSchema mixed_schema() {
  FlowSchema s;
  s.feature_columns = {{"IN_BYTES", ColumnKind::numeric},
                       {"PROTOCOL", ColumnKind::categorical},
                       {"FLOW_DURATION", ColumnKind::numeric}};
  return s;
}

}  // namespace

TEST_CASE("csv reader handles quoting, embedded newlines and CRLF") {
  std::istringstream in("a,\"b,c\",\"d\"\"e\"\r\n\"multi\nline\",,x\n");
  csv::Reader r(in);
  std::vector<std::string> f;
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"a", "b,c", "d\"e"});
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"multi\nline", "", "x"});
  CHECK(r.line() == 3);
  CHECK_FALSE(r.next(f));
}

TEST_CASE("csv doubles round-trip exactly") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, 0.1 + 0.2}) {
    const auto back = csv::parse_double(csv::format_double(v));
    REQUIRE(back.has_value());
    CHECK(std::memcmp(&*back, &v, sizeof v) == 0);
  }
  CHECK(csv::parse_double(" +2.5 ") == 2.5);
  CHECK_FALSE(csv::parse_double("12abc").has_value());
  CHECK_FALSE(csv::parse_double("").has_value());
}

TEST_CASE("schema validation") {
  auto s = mixed_schema();
  CHECK_NOTHROW(s.validate());
  s.feature_columns.push_back({"IN_BYTES", ColumnKind::numeric});
  CHECK(error_category([&] { s.validate(); }) == "invalid-spec");
  FlowSchema clash = mixed_schema();
  clash.label_column = "PROTOCOL";
  CHECK(error_category([&] { clash.validate(); }) == "invalid-spec");
  CHECK(error_category([] { FlowSchema{}.validate(); }) == "invalid-spec");

  const nlohmann::json j = mixed_schema();
  CHECK(j.get<FlowSchema>() == mixed_schema());
  CHECK(error_category([] { parse_kind("ordinal"); }) == "invalid-spec");
}

TEST_CASE("flow table stores missing cells and rejects empty labels") {
  FlowTable t(mixed_schema());
  const std::vector<Cell> a{10.0, std::string("tcp"), Cell{}};
  const std::vector<Cell> b{std::nan(""), std::string(""), 2.5};
  t.append_row(a, "Benign");
  t.append_row(b, "ddos");
  CHECK(t.n_rows() == 2);
  CHECK(t.is_missing(0, 2));
  CHECK(t.is_missing(1, 0));
  CHECK(t.is_missing(1, 1));
  CHECK_FALSE(t.is_missing(0, 1));
  CHECK(std::get<std::string>(t.cell(0, 1)) == "tcp");
  CHECK(t.label(1) == "ddos");
  CHECK(error_category([&] { t.append_row(a, ""); }) == "invalid-argument");
}

TEST_CASE("csv write/load round trip, including awkward text") {
  TempDir dir("flow_rt");
  FlowTable t(mixed_schema());
  t.append_row(std::vector<Cell>{1.0 / 3.0, std::string("a,b"), -7.0}, "Benign");
  t.append_row(std::vector<Cell>{Cell{}, std::string("quote\"d\nline"), 1e-12}, "x\"ss");
  t.append_row(std::vector<Cell>{4.0, Cell{}, Cell{}}, "ddos");
  write_csv(t, dir / "t.csv");
  CHECK(load_csv(dir / "t.csv", mixed_schema()) == t);
}

TEST_CASE("csv loading errors carry categories") {
  TempDir dir("flow_err");
  write_file(dir / "empty.csv", "");
  CHECK(error_category([&] { load_csv(dir / "empty.csv", mixed_schema()); }) == "empty-input");

  write_file(dir / "nocol.csv", "IN_BYTES,PROTOCOL,Attack\n1,tcp,Benign\n");
  try {
    load_csv(dir / "nocol.csv", mixed_schema());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::schema_mismatch);
    CHECK(std::string(e.what()).find("FLOW_DURATION") != std::string::npos);
  }

  write_file(dir / "short.csv", "IN_BYTES,PROTOCOL,FLOW_DURATION,Attack\n1,tcp\n");
  CHECK(error_category([&] { load_csv(dir / "short.csv", mixed_schema()); }) == "schema-mismatch");

  CHECK(error_category([&] { load_csv(dir / "absent.csv", mixed_schema()); }) == "io");
}

TEST_CASE("extra columns are ignored, blank lines skipped, bad numbers become missing") {
  TempDir dir("flow_extra");
  write_file(dir / "x.csv",
             "Attack,IPV4_SRC_ADDR,FLOW_DURATION,PROTOCOL,IN_BYTES\n"
             "Benign,10.0.0.1,5,udp,abc\n"
             "\n"
             "dos,10.0.0.2,inf,,7\n");
  const auto t = load_csv(dir / "x.csv", mixed_schema());
  REQUIRE(t.n_rows() == 2);
  CHECK(t.is_missing(0, 0));
  CHECK(std::get<double>(t.cell(0, 2)) == 5.0);
  CHECK(t.is_missing(1, 2));
  CHECK(t.is_missing(1, 1));
  CHECK(std::get<double>(t.cell(1, 0)) == 7.0);
  CHECK(t.label(1) == "dos");
}

TEST_CASE("streamed chunks concatenate to the whole file") {
  TempDir dir("flow_stream");
  SynthSpec spec;
  spec.n_rows = 1003;
  spec.missing_rate = 0.05;
  spec.seed = 5;
  const auto whole = synth_generate(spec);
  write_csv(whole, dir / "s.csv");
  for (std::size_t chunk : {1u, 64u, 1003u, 5000u}) {
    FlowCsvStream stream(dir / "s.csv", spec.schema());
    std::vector<std::size_t> sizes;
    FlowTable joined(spec.schema());
    while (auto c = stream.next_chunk(chunk)) {
      sizes.push_back(c->n_rows());
      for (std::size_t i = 0; i < c->n_rows(); ++i) {
        std::vector<Cell> cells;
        for (std::size_t j = 0; j < c->n_features(); ++j) cells.push_back(c->cell(i, j));
        joined.append_row(cells, c->label(i));
      }
    }
    CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == 1003);
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) CHECK(sizes[k] == std::min<std::size_t>(chunk, 1003));
    CHECK(joined == whole);
  }
}

TEST_CASE("default class priors follow the reference supports") {
  const auto names = default_class_names();
  const auto priors = default_class_priors();
  REQUIRE(names.size() == 10);
  CHECK(names.front() == "Benign");
  CHECK(std::is_sorted(names.begin(), names.end()));
  const std::vector<double> supports{1080385, 4878, 523977, 196308, 198140, 2317, 298115, 1007, 900651, 734987};
  const double total = std::accumulate(supports.begin(), supports.end(), 0.0);
  CHECK(total == 3940765.0);
  for (std::size_t k = 0; k < 10; ++k) CHECK(priors[k] == doctest::Approx(supports[k] / total).epsilon(1e-15));
}

TEST_CASE("synthetic generator is seeded and chunk-size independent") {
  SynthSpec spec;
  spec.n_rows = 2000;
  spec.missing_rate = 0.1;
  spec.seed = 42;
  const auto a = synth_generate(spec);
  CHECK(a == synth_generate(spec));
  SynthGenerator gen(spec);
  FlowTable joined(spec.schema());
  std::size_t step = 1;
  while (!gen.done()) {
    const auto c = gen.next_chunk(step);
    step = step * 3 + 1;
    for (std::size_t i = 0; i < c.n_rows(); ++i) {
      std::vector<Cell> cells;
      for (std::size_t j = 0; j < c.n_features(); ++j) cells.push_back(c.cell(i, j));
      joined.append_row(cells, c.label(i));
    }
  }
  CHECK(joined == a);
  spec.seed = 43;
  CHECK_FALSE(synth_generate(spec) == a);
}

TEST_CASE("synthetic class frequencies and missing rate match the spec") {
  SynthSpec spec;
  spec.n_rows = 100000;
  spec.missing_rate = 0.2;
  spec.seed = 9;
  const auto t = synth_generate(spec);
  const auto names = default_class_names();
  const auto priors = default_class_priors();
  std::vector<double> counts(names.size());
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    const auto it = std::find(names.begin(), names.end(), t.label(i));
    REQUIRE(it != names.end());
    counts[static_cast<std::size_t>(it - names.begin())] += 1;
  }
  for (std::size_t k = 0; k < names.size(); ++k) {
    const double n = static_cast<double>(spec.n_rows);
    const double sd = std::sqrt(n * priors[k] * (1 - priors[k]));
    CHECK(std::abs(counts[k] - n * priors[k]) <= 5 * sd + 1);
  }
  std::size_t missing = 0;
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    for (std::size_t j = 0; j < t.n_features(); ++j) missing += t.is_missing(i, j);
  }
  const double cells = static_cast<double>(t.n_rows() * t.n_features());
  CHECK(static_cast<double>(missing) / cells == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("synth spec JSON requires a seed and validates") {
  nlohmann::json j = {{"n_rows", 10}};
  CHECK_THROWS(j.get<SynthSpec>());
  j["seed"] = 3;
  const auto s = j.get<SynthSpec>();
  CHECK(s.n_numeric == 20);
  CHECK(s.class_names == default_class_names());
  SynthSpec bad = s;
  bad.class_priors.back() += 0.5;
  CHECK(error_category([&] { bad.validate(); }) == "invalid-spec");
  bad = s;
  bad.n_rows = 0;
  CHECK(error_category([&] { bad.validate(); }) == "invalid-spec");
}
