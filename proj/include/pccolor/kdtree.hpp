// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pccolor/cloud.hpp"

namespace pccolor {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;  // Euclidean, not squared

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// k nearest source points of one query, ascending by distance with ties
/// ordered by source index.
struct NeighborSet {
  std::size_t target = 0;
  std::vector<Neighbor> neighbors;
};

/// Static, exact KD-tree over a fixed set of positions. Immutable after
/// construction; const member functions are safe to call concurrently.
class SpatialIndex {
 public:
  /// Throws EmptyCloud when `points` is empty.
  explicit SpatialIndex(std::vector<Vec3> points);

  std::size_t size() const noexcept { return points_.size(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }

  Neighbor nearest(const Vec3& query) const;

  /// Returns min(k, size()) neighbors. k must be >= 1.
  std::vector<Neighbor> k_nearest(const Vec3& query, std::size_t k) const;

 private:
  struct Node {
    // Leaves hold [begin, end) of order_; inner nodes split on `axis` at `split`.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double split = 0.0;
    std::uint8_t axis = 0;
  };

  struct Candidate {
    double d2;
    std::size_t index;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& q, std::size_t k, std::vector<Candidate>& heap) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

SpatialIndex build_index(const ColorPointCloud& source);

/// NeighborSet for target point `target` at position `query`.
NeighborSet k_nearest(const SpatialIndex& index, std::size_t target, const Vec3& query, std::size_t k);

}  // namespace pccolor
