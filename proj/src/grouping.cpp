// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/grouping.hpp"

#include <algorithm>

#include "pccolor/error.hpp"

namespace pccolor {

std::string_view to_string(PartitionKind kind) noexcept {
  switch (kind) {
    case PartitionKind::Single: return "single";
    case PartitionKind::Bi: return "bi";
    case PartitionKind::Tri: return "tri";
  }
  return "unknown";
}

std::string_view to_string(Group g) noexcept {
  switch (g) {
    case Group::Close: return "close";
    case Group::Moderate: return "moderate";
    case Group::Distant: return "distant";
  }
  return "unknown";
}

OverlapEstimate estimate_overlap(const DistanceDistribution& dist, double t_d) {
  if (!(t_d > 0.0)) throw Error(ErrorCode::InvalidConfig, "t_d must be positive");
  const double limit = dist.squared ? t_d * t_d : t_d;
  OverlapEstimate est;
  est.t_d = t_d;
  est.votes = static_cast<std::size_t>(
      std::count_if(dist.values.begin(), dist.values.end(), [&](double v) { return v < limit; }));
  est.rate = dist.values.empty() ? 0.0 : static_cast<double>(est.votes) / static_cast<double>(dist.values.size());
  return est;
}

PartitionKind choose_partition(const OverlapEstimate& overlap, double t_r) {
  if (!(t_r > 0.0 && t_r < 1.0)) throw Error(ErrorCode::InvalidConfig, "t_r must lie in (0, 1)");
  return overlap.rate <= t_r ? PartitionKind::Bi : PartitionKind::Tri;
}

std::size_t GroupAssignment::count(Group g) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), g));
}

std::vector<std::size_t> GroupAssignment::members(Group g) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == g) out.push_back(i);
  }
  return out;
}

GroupAssignment partition(const DistanceDistribution& dist, PartitionKind kind,
                          const std::optional<ThresholdSet>& thresholds) {
  GroupAssignment out;
  out.kind = kind;
  out.labels.assign(dist.values.size(), Group::Close);
  if (kind == PartitionKind::Single) return out;
  if (!thresholds) throw Error(ErrorCode::InvalidConfig, "bi/tri partition requires thresholds");
  out.thresholds = thresholds;
  const bool tri = kind == PartitionKind::Tri;
  if (tri && thresholds->kind != ThresholdKind::ThreeLevel) {
    throw Error(ErrorCode::InvalidConfig, "tri partition requires three-level thresholds");
  }
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    const double v = dist.values[i];
    if (v <= thresholds->t1) {
      out.labels[i] = Group::Close;
    } else if (!tri || v <= thresholds->t2) {
      out.labels[i] = Group::Moderate;
    } else {
      out.labels[i] = Group::Distant;
    }
  }
  return out;
}

GroupAssignment group_targets(const DistanceDistribution& dist, PartitionKind requested) {
  if (requested == PartitionKind::Tri) {
    try {
      return partition(dist, PartitionKind::Tri, otsu_three_level(dist));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateDistribution) throw;
    }
    requested = PartitionKind::Bi;
  }
  if (requested == PartitionKind::Bi) {
    try {
      return partition(dist, PartitionKind::Bi, otsu_two_level(dist));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateDistribution) throw;
    }
  }
  return partition(dist, PartitionKind::Single, std::nullopt);
}

}  // namespace pccolor
