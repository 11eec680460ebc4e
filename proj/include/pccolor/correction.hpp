// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pccolor/cloud.hpp"
#include "pccolor/colorspace.hpp"
#include "pccolor/grouping.hpp"
#include "pccolor/kdtree.hpp"
#include "pccolor/thresholding.hpp"

namespace pccolor {

/// Neighbor count, bilateral scales and the CIELAB validity threshold used
/// by the local (KBI) correction.
struct KbiParams {
  std::size_t k = 8;
  double sigma_d = 0.003;  // meters
  double sigma_c = 25.0;   // color levels
  double delta_e_max = 20.0;
};

/// Neighbors that survived the color-difference filter. `fallback` is set
/// when none survived and only the single nearest neighbor was kept.
struct ValidNeighborSet {
  std::size_t target = 0;
  std::vector<Neighbor> neighbors;
  double d_avg = 0.0;
  bool fallback = false;
};

ValidNeighborSet filter_valid_neighbors(const ColorPointCloud& target, const ColorPointCloud& source,
                                        const NeighborSet& ns, double delta_e_max);

/// Bilateral weighted mean of the per-channel differences (source - target)
/// over `vn`. Weights are exp(-d^2/sigma_d^2) * exp(-D^2/sigma_c^2); they are
/// normalized in log space so far-away neighbor sets do not underflow.
double kbi_delta(const Rgb& target_color, std::span<const Rgb> source_colors, const ValidNeighborSet& vn,
                 const KbiParams& params, Channel channel);

/// c + delta, rounded half away from zero and clamped to [0, 255].
std::uint8_t round_clamp(double v);

/// Linear map from a point's average valid-neighbor distance to its KBI/HE
/// blend weights, spanned by the smallest and largest d_avg of the group.
struct ModerateWeighting {
  double d_min = 0.0;
  double d_max = 0.0;

  /// Returns {w1, w2} with w1 + w2 == 1. A zero-width range gives w2 = 0.
  std::pair<double, double> weights(double d_avg) const;
};

/// Throws InvalidConfig when `members` is empty.
ModerateWeighting moderate_weighting(std::span<const std::size_t> members, std::span<const ValidNeighborSet> valid);

enum class HeMode { Moderate, Distant };

struct HeWorkingSets {
  std::vector<std::size_t> target;
  std::vector<std::size_t> source;  // nearest source of each target member, duplicates kept
};

/// Moderate: Close and Moderate points. Distant: every target point.
HeWorkingSets build_he_working_sets(const GroupAssignment& assignment, HeMode mode,
                                    std::span<const std::size_t> nearest);

/// Per-channel lookup table c -> he_map(cdf_t, cdf_s, c).
using HeTables = std::array<std::array<std::uint8_t, 256>, 3>;

HeTables build_he_tables(std::span<const Rgb> target_colors, std::span<const Rgb> source_colors,
                         const HeWorkingSets& sets);

/// Shared read-only state for the three group kernels. `valid` is indexed
/// by target point.
struct CorrectionContext {
  const ColorPointCloud& source;
  std::span<const Rgb> target_colors;  // colors the kernels read
  std::span<const ValidNeighborSet> valid;
  KbiParams params;
};

/// KBI on every member.
void correct_close(const CorrectionContext& ctx, std::span<const std::size_t> members, std::span<Rgb> out);

/// JKHE: c + w1 * KBI + w2 * (he(c) - c). `fixed_weights` overrides the
/// distance-driven weighting with a constant {w1, w2} pair.
void correct_moderate(const CorrectionContext& ctx, std::span<const std::size_t> members,
                      const ModerateWeighting& weighting, const HeTables& tables, std::span<Rgb> out,
                      std::optional<std::pair<double, double>> fixed_weights = std::nullopt);

/// HE only: c <- he(c).
void correct_distant(std::span<const Rgb> target_colors, std::span<const std::size_t> members,
                     const HeTables& tables, std::span<Rgb> out);

enum class PartitionOverride { Auto, ForceBi, ForceTri };

struct PipelineConfig {
  KbiParams kbi;
  bool sigma_d_auto = true;  // estimate sigma_d from source spacing
  double t_r = 0.45;
  double t_d = 0.003;
  std::size_t bins = 1024;
  PartitionOverride partition = PartitionOverride::Auto;
  bool even_weights = false;
  bool kbi_only = false;
  bool jkhe_only = false;
  bool sequential_groups = false;
  bool squared_distances = false;

  /// Throws InvalidConfig for non-positive parameters or conflicting flags.
  void validate() const;
};

struct CorrectionReport {
  PartitionKind partition = PartitionKind::Single;
  OverlapEstimate overlap;
  std::optional<ThresholdSet> thresholds;
  std::size_t close = 0;
  std::size_t moderate = 0;
  std::size_t distant = 0;
  double sigma_d_used = 0.0;
  std::optional<ModerateWeighting> weighting;
};

struct PipelineResult {
  ColorPointCloud corrected;
  CorrectionReport report;
};

/// Mean distance from each source point to its nearest other source point.
/// Returns `fallback` for single-point or fully coincident clouds.
double mean_spacing(const SpatialIndex& index, double fallback);

/// Full grouping-based correction. The inputs are not modified; the output
/// keeps the target's positions and point order.
PipelineResult run_pipeline(const ColorPointCloud& source_aligned, const ColorPointCloud& target,
                            const PipelineConfig& config);

}  // namespace pccolor
