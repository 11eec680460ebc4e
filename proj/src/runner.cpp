// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/runner.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "pccolor/baselines.hpp"
#include "pccolor/error.hpp"

namespace pccolor {

using nlohmann::json;

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Ours: return "ours";
    case Method::Nn: return "nn";
    case Method::Knn: return "knn";
    case Method::Hm: return "hm";
    case Method::Agl: return "agl";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

json thresholds_json(const std::optional<ThresholdSet>& t) {
  if (!t) return nullptr;
  if (t->kind == ThresholdKind::TwoLevel) return json{{"kind", "two_level"}, {"t_b", t->t1}};
  return json{{"kind", "three_level"}, {"t1", t->t1}, {"t2", t->t2}};
}

json params_json(const RunConfig& config, const std::optional<CorrectionReport>& pipeline) {
  const PipelineConfig& p = config.pipeline;
  json j;
  j["k"] = p.kbi.k;
  j["sigma_d"] = p.sigma_d_auto ? json("auto") : json(p.kbi.sigma_d);
  j["sigma_d_used"] = pipeline ? json(pipeline->sigma_d_used) : json(nullptr);
  j["sigma_c"] = p.kbi.sigma_c;
  j["delta_e_max"] = p.kbi.delta_e_max;
  j["t_r"] = p.t_r;
  j["t_d"] = p.t_d;
  j["bins"] = p.bins;
  j["force_bi"] = p.partition == PartitionOverride::ForceBi;
  j["force_tri"] = p.partition == PartitionOverride::ForceTri;
  j["even_weights"] = p.even_weights;
  j["kbi_only"] = p.kbi_only;
  j["jkhe_only"] = p.jkhe_only;
  j["sequential_groups"] = p.sequential_groups;
  j["squared_distances"] = p.squared_distances;
  j["cpsnr_mode"] = config.cpsnr == CpsnrMode::Pooled ? "pooled" : "per_point";
  j["note"] = config.method == Method::Agl ? json("global mean/std stage only; no local adaptation stage")
                                           : json(nullptr);
  return j;
}

MethodRun run_method(const ColorPointCloud& source, const ColorPointCloud& target, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  MethodRun run;
  std::optional<CorrectionReport> pipeline;
  switch (config.method) {
    case Method::Ours: {
      PipelineResult r = run_pipeline(source, target, config.pipeline);
      run.corrected = std::move(r.corrected);
      pipeline = r.report;
      break;
    }
    case Method::Nn: run.corrected = nn_correct(source, target); break;
    case Method::Knn: run.corrected = knn_correct(source, target, config.pipeline.kbi.k); break;
    case Method::Hm: run.corrected = hm_correct(source, target); break;
    case Method::Agl: run.corrected = agl_correct(source, target); break;
  }
  const MetricReport metrics = evaluate(run.corrected, source, config.cpsnr);
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  json& j = run.report;
  j["method"] = to_string(config.method);
  j["params"] = params_json(config, pipeline);
  j["overlap_rate"] = pipeline ? json(pipeline->overlap.rate) : json(nullptr);
  j["partition"] = pipeline ? json(to_string(pipeline->partition)) : json(nullptr);
  j["thresholds"] = pipeline ? thresholds_json(pipeline->thresholds) : json(nullptr);
  j["group_sizes"] = pipeline ? json{{"close", pipeline->close}, {"moderate", pipeline->moderate},
                                     {"distant", pipeline->distant}}
                              : json(nullptr);
  j["cmd"] = metrics.cmd;
  j["cpsnr"] = metrics.cpsnr;
  j["runtime_ms"] = config.record_runtime ? json(elapsed) : json(nullptr);
  return run;
}

json compare_methods(const ColorPointCloud& source, const ColorPointCloud& target, const std::vector<Method>& methods,
                     const RunConfig& base) {
  json rows = json::array();
  for (Method m : methods) {
    RunConfig cfg = base;
    cfg.method = m;
    const MethodRun run = run_method(source, target, cfg);
    rows.push_back(json{{"method", run.report["method"]},
                        {"cmd", run.report["cmd"]},
                        {"cpsnr", run.report["cpsnr"]},
                        {"partition", run.report["partition"]}});
  }
  return json{{"rows", rows}};
}

std::string format_compare_table(const json& table) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-8s %12s %12s %10s\n", "method", "CMD", "CPSNR", "partition");
  out << line;
  for (const json& row : table.at("rows")) {
    const std::string partition = row["partition"].is_null() ? "-" : row["partition"].get<std::string>();
    std::snprintf(line, sizeof(line), "%-8s %12.4f %12.4f %10s\n", row["method"].get<std::string>().c_str(),
                  row["cmd"].get<double>(), row["cpsnr"].get<double>(), partition.c_str());
    out << line;
  }
  return out.str();
}

json metrics_json(const MetricReport& m) {
  return json{{"cmd", m.cmd},
              {"cpsnr", m.cpsnr},
              {"points", m.points},
              {"corrected_mean", m.corrected_mean},
              {"source_mean", m.source_mean}};
}

json truth_json(const SynthSpec& spec, const SynthPair& pair) {
  return json{{"points", spec.points},
              {"overlap", spec.overlap},
              {"bias", spec.bias},
              {"gain", spec.gain},
              {"noise_std", spec.noise_std},
              {"seed", spec.seed},
              {"extent", spec.extent},
              {"source_count", pair.source.size()},
              {"target_count", pair.target.size()},
              {"overlap_target_count", pair.overlap_points}};
}

}  // namespace pccolor
