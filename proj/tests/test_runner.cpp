// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "pccolor/error.hpp"
#include "pccolor/runner.hpp"
#include "pccolor/synth.hpp"

using namespace pccolor;
using nlohmann::json;

namespace {

SynthPair biased_pair() {
  SynthSpec spec;
  spec.points = 3000;
  spec.overlap = 0.7;
  spec.bias = {20, 20, 20};
  spec.noise_std = 2.0;
  spec.seed = 17;
  return generate_pair(spec);
}

std::set<std::string> keys_of(const json& j) {
  std::set<std::string> k;
  for (const auto& [key, value] : j.items()) k.insert(key);
  return k;
}

}  // namespace

TEST_CASE("synth identity distortion") {
  SynthSpec spec;
  spec.points = 2000;
  spec.overlap = 1.0;
  const auto p = generate_pair(spec);
  CHECK(p.source == p.target);
  CHECK(p.target == p.target_truth);
  CHECK(p.overlap_points == p.target.size());
}

TEST_CASE("synth is deterministic and seed dependent") {
  SynthSpec spec;
  spec.points = 1500;
  spec.noise_std = 3.0;
  spec.bias = {5, -5, 0};
  const auto a = generate_pair(spec);
  const auto b = generate_pair(spec);
  CHECK(a.source == b.source);
  CHECK(a.target == b.target);
  spec.seed = 2;
  CHECK_FALSE(generate_pair(spec).target == a.target);
}

TEST_CASE("synth bias moment check on the overlap region") {
  SynthSpec spec;
  spec.points = 20000;
  spec.overlap = 0.6;
  spec.bias = {20, 20, 20};
  const auto p = generate_pair(spec);
  const auto idx = build_index(p.source);
  double diff = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.target.size(); ++i) {
    if (p.target.positions[i][0] >= spec.extent) continue;
    const auto nn = idx.nearest(p.target.positions[i]);
    CHECK(nn.distance == 0.0);
    diff += double(p.target.colors[i].r) - double(p.source.colors[nn.index].r);
    ++n;
  }
  CHECK(n == p.overlap_points);
  CHECK(std::abs(diff / double(n) - 20.0) < 0.5);
}

TEST_CASE("synth spec validation") {
  SynthSpec spec;
  spec.overlap = 0.0;
  CHECK_THROWS_AS(generate_pair(spec), Error);
  spec = {};
  spec.points = 0;
  CHECK_THROWS_AS(generate_pair(spec), Error);
  spec = {};
  spec.gain[1] = -1.0;
  CHECK_THROWS_AS(generate_pair(spec), Error);
  spec = {};
  spec.noise_std = -1.0;
  CHECK_THROWS_AS(generate_pair(spec), Error);
}

TEST_CASE("method names") {
  for (auto m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("hhm"), Error);
}

TEST_CASE("reports are schema stable") {
  const auto p = biased_pair();
  std::set<std::string> expected;
  std::set<std::string> params;
  for (auto m : kAllMethods) {
    RunConfig cfg;
    cfg.method = m;
    const auto run = run_method(p.source, p.target, cfg);
    if (expected.empty()) {
      expected = keys_of(run.report);
      params = keys_of(run.report["params"]);
    }
    CHECK(keys_of(run.report) == expected);
    CHECK(keys_of(run.report["params"]) == params);
    CHECK(run.report["runtime_ms"].is_null());
    CHECK(run.report["method"] == std::string(to_string(m)));
    if (m == Method::Ours) {
      CHECK_FALSE(run.report["partition"].is_null());
    } else {
      CHECK(run.report["partition"].is_null());
      CHECK(run.report["thresholds"].is_null());
    }
  }
  for (const char* k : {"method", "params", "overlap_rate", "partition", "thresholds", "group_sizes", "cmd", "cpsnr",
                        "runtime_ms"})
    CHECK(expected.count(k) == 1);
}

TEST_CASE("different methods give different cmd") {
  const auto p = biased_pair();
  RunConfig ours, nn;
  nn.method = Method::Nn;
  CHECK(run_method(p.source, p.target, ours).report["cmd"] != run_method(p.source, p.target, nn).report["cmd"]);
}

TEST_CASE("force-bi removes the distant group") {
  SynthSpec spec;
  spec.points = 3000;
  spec.overlap = 0.9;
  spec.bias = {10, 0, -10};
  const auto p = generate_pair(spec);
  RunConfig cfg;
  cfg.pipeline.partition = PartitionOverride::ForceBi;
  const auto run = run_method(p.source, p.target, cfg);
  CHECK(run.report["partition"] == "bi");
  CHECK(run.report["group_sizes"]["distant"] == 0);
  CHECK(run.report["thresholds"]["kind"] == "two_level");
  CHECK(run.report["params"]["force_bi"] == true);
}

TEST_CASE("identity pair gives zero cmd for the reference-copying methods") {
  // knn averages distinct neighbors, so it is not a fixed point in general.
  std::mt19937_64 rng(71);
  auto c = oracle::random_cloud(rng, 1500);
  for (std::size_t i = 0; i < c.size(); ++i) c.colors[i] = c.positions[i][0] < 0.5 ? Rgb{200, 40, 40} : Rgb{30, 30, 200};
  const std::vector<Method> some{Method::Ours, Method::Nn, Method::Hm, Method::Agl};
  const auto table = compare_methods(c, c, some, RunConfig{});
  REQUIRE(table["rows"].size() == 4);
  for (const auto& row : table["rows"]) CHECK(row["cmd"].get<double>() == 0.0);
  CHECK(table["rows"][0]["partition"] == "single");
}

TEST_CASE("compare rows agree with single runs") {
  const auto p = biased_pair();
  const std::vector<Method> some{Method::Ours, Method::Hm, Method::Knn};
  const auto table = compare_methods(p.source, p.target, some, RunConfig{});
  REQUIRE(table["rows"].size() == 3);
  for (std::size_t i = 0; i < some.size(); ++i) {
    RunConfig cfg;
    cfg.method = some[i];
    const auto run = run_method(p.source, p.target, cfg);
    CHECK(table["rows"][i]["method"] == run.report["method"]);
    CHECK(table["rows"][i]["cmd"] == run.report["cmd"]);
    CHECK(table["rows"][i]["cpsnr"] == run.report["cpsnr"]);
  }
  const auto text = format_compare_table(table);
  CHECK(text.find("hm") != std::string::npos);
}

TEST_CASE("runtime is recorded only on request") {
  const auto p = biased_pair();
  RunConfig cfg;
  cfg.method = Method::Agl;
  cfg.record_runtime = true;
  CHECK(run_method(p.source, p.target, cfg).report["runtime_ms"].is_number());
}
