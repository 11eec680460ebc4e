// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pccolor/cloud.hpp"
#include "pccolor/kdtree.hpp"

namespace pccolor {

/// Per-target nearest-source distances and their histogram over
/// [0, max value]. When `squared` is set every value is a squared distance
/// and all thresholds derived from it are in squared units too.
struct DistanceDistribution {
  std::vector<double> values;
  std::vector<std::size_t> nearest;  // nearest source index per target point
  std::vector<std::uint64_t> bins;
  double bin_width = 1.0;
  double max_value = 0.0;
  bool squared = false;

  std::size_t bin_of(double v) const;
};

/// Fills the histogram part of `dist` from its `values`. B = bins >= 2.
void bin_distribution(DistanceDistribution& dist, std::size_t bins);

/// Nearest source distance for every target point, binned into `bins` bins.
/// Throws EmptyCloud for an empty target.
DistanceDistribution build_distance_distribution(const ColorPointCloud& target, const SpatialIndex& index,
                                                 std::size_t bins = 1024, bool squared = false);

enum class ThresholdKind { TwoLevel, ThreeLevel };

/// Cuts are bin indices: class j holds bins [cut[j-1], cut[j]). The
/// corresponding thresholds are bin upper edges (cut * bin_width) in the
/// distribution's value units.
struct ThresholdSet {
  ThresholdKind kind = ThresholdKind::TwoLevel;
  std::size_t cut1 = 0;
  std::size_t cut2 = 0;  // three-level only
  double t1 = 0.0;       // t_b for two-level
  double t2 = 0.0;       // three-level only
};

/// Otsu on the binned distribution: maximizes between-class variance over
/// every cut that leaves both classes non-empty; ties go to the smallest
/// cut. Throws DegenerateDistribution with fewer than two non-empty bins.
ThresholdSet otsu_two_level(const DistanceDistribution& dist);
ThresholdSet otsu_two_level(const std::vector<std::uint64_t>& bins, double bin_width);

/// Exhaustive three-class Otsu; ties go to the lexicographically smallest
/// (cut1, cut2). Throws DegenerateDistribution with fewer than three
/// non-empty bins.
ThresholdSet otsu_three_level(const DistanceDistribution& dist);
ThresholdSet otsu_three_level(const std::vector<std::uint64_t>& bins, double bin_width);

}  // namespace pccolor
