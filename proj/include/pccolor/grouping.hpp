// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pccolor/thresholding.hpp"

namespace pccolor {

struct OverlapEstimate {
  std::size_t votes = 0;
  double rate = 0.0;
  double t_d = 0.0;  // meters
};

/// One vote per target point whose nearest source point is strictly closer
/// than t_d meters. Squared distributions compare against t_d^2.
OverlapEstimate estimate_overlap(const DistanceDistribution& dist, double t_d);

enum class PartitionKind { Single, Bi, Tri };

std::string_view to_string(PartitionKind kind) noexcept;

/// Bi when rate <= t_r, otherwise Tri.
PartitionKind choose_partition(const OverlapEstimate& overlap, double t_r);

enum class Group : std::uint8_t { Close = 0, Moderate = 1, Distant = 2 };

std::string_view to_string(Group g) noexcept;

struct GroupAssignment {
  PartitionKind kind = PartitionKind::Single;
  std::optional<ThresholdSet> thresholds;  // empty for Single
  std::vector<Group> labels;

  std::size_t count(Group g) const;
  std::vector<std::size_t> members(Group g) const;
};

/// Labels every target point by comparing its distance with the thresholds;
/// a value equal to a threshold joins the lower group. Single puts every
/// point in Close and ignores `thresholds`.
GroupAssignment partition(const DistanceDistribution& dist, PartitionKind kind,
                          const std::optional<ThresholdSet>& thresholds);

/// Runs the requested Otsu variant and falls back tri -> bi -> single when
/// the distribution is too degenerate to support it.
GroupAssignment group_targets(const DistanceDistribution& dist, PartitionKind requested);

}  // namespace pccolor
