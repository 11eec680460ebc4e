// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pccolor/error.hpp"

namespace pccolor {

namespace {

constexpr std::uint32_t kLeafSize = 12;

// Strict weak order used everywhere candidates are compared: distance first,
// then source index, which makes every query deterministic.
struct CandidateLess {
  template <typename C>
  bool operator()(const C& a, const C& b) const noexcept {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
  }
};

}  // namespace

SpatialIndex::SpatialIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::EmptyCloud, "cannot index an empty cloud");
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidCloud, "cloud too large to index");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-lo[0], -lo[1], -lo[2]};
  for (std::uint32_t i = begin; i < end; ++i) {
    const Vec3& p = points_[order_[i]];
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  std::uint8_t axis = 0;
  for (std::uint8_t a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  if (hi[axis] == lo[axis]) return id;  // all coincident: keep as one leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.split = split;
  node.axis = axis;
  return id;
}

void SpatialIndex::search(std::int32_t id, const Vec3& q, std::size_t k, std::vector<Candidate>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      const Candidate c{squared_distance(q, points_[idx]), idx};
      if (heap.size() < k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end(), CandidateLess{});
      } else if (CandidateLess{}(c, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), CandidateLess{});
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end(), CandidateLess{});
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::int32_t near_child = diff < 0.0 ? node.left : node.right;
  const std::int32_t far_child = diff < 0.0 ? node.right : node.left;
  search(near_child, q, k, heap);
  // Every point behind the plane is at least |diff| away; equality must still
  // be visited because a tie may be won on index.
  if (heap.size() < k || diff * diff <= heap.front().d2) search(far_child, q, k, heap);
}

Neighbor SpatialIndex::nearest(const Vec3& query) const {
  const auto result = k_nearest(query, 1);
  return result.front();
}

std::vector<Neighbor> SpatialIndex::k_nearest(const Vec3& query, std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
  k = std::min(k, points_.size());
  std::vector<Candidate> heap;
  heap.reserve(k);
  search(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end(), CandidateLess{});
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  for (const Candidate& c : heap) out.push_back(Neighbor{c.index, std::sqrt(c.d2)});
  return out;
}

SpatialIndex build_index(const ColorPointCloud& source) { return SpatialIndex(source.positions); }

NeighborSet k_nearest(const SpatialIndex& index, std::size_t target, const Vec3& query, std::size_t k) {
  return NeighborSet{target, index.k_nearest(query, k)};
}

}  // namespace pccolor
