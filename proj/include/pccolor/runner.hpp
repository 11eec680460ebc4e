// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pccolor/cloud.hpp"
#include "pccolor/correction.hpp"
#include "pccolor/metrics.hpp"
#include "pccolor/synth.hpp"

namespace pccolor {

enum class Method { Ours, Nn, Knn, Hm, Agl };

inline constexpr std::array<Method, 5> kAllMethods{Method::Ours, Method::Nn, Method::Knn, Method::Hm, Method::Agl};

std::string_view to_string(Method m) noexcept;
/// Throws InvalidConfig for unknown names.
Method parse_method(std::string_view name);

/// Everything that selects and parameterizes one correction run.
struct RunConfig {
  Method method = Method::Ours;
  PipelineConfig pipeline;
  CpsnrMode cpsnr = CpsnrMode::PerPoint;
  bool record_runtime = false;  // runtime_ms stays null otherwise, keeping reports reproducible
};

struct MethodRun {
  ColorPointCloud corrected;
  nlohmann::json report;
};

/// Runs one method and evaluates it against the source. The report always
/// carries the keys method, params, overlap_rate, partition, thresholds,
/// group_sizes, cmd, cpsnr and runtime_ms; concepts a method lacks are null.
MethodRun run_method(const ColorPointCloud& source_aligned, const ColorPointCloud& target, const RunConfig& config);

nlohmann::json params_json(const RunConfig& config, const std::optional<CorrectionReport>& pipeline);
nlohmann::json thresholds_json(const std::optional<ThresholdSet>& t);

/// One row per requested method, in request order.
nlohmann::json compare_methods(const ColorPointCloud& source_aligned, const ColorPointCloud& target,
                               const std::vector<Method>& methods, const RunConfig& base);

/// Fixed-width text rendering of compare_methods output.
std::string format_compare_table(const nlohmann::json& rows);

nlohmann::json metrics_json(const MetricReport& m);
nlohmann::json truth_json(const SynthSpec& spec, const SynthPair& pair);

}  // namespace pccolor
