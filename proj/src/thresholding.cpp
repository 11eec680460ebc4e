// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/thresholding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "pccolor/error.hpp"
#include "pccolor/parallel.hpp"

namespace pccolor {

namespace {

using boost::multiprecision::int512_t;

// Count and first moment (in bin-index units) of one class.
struct ClassStats {
  std::uint64_t n = 0;
  std::uint64_t s = 0;

  friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

// Otsu's between-class variance is N * sum_k(s_k^2 / n_k) - S^2 up to a
// positive factor, so the partition maximizing sum_k(s_k^2 / n_k) wins.
template <std::size_t K>
struct Objective {
  std::array<ClassStats, K> cls;
  long double approx = 0.0L;

  explicit Objective(const std::array<ClassStats, K>& c) : cls(c) {
    for (const ClassStats& k : cls) {
      const long double s = static_cast<long double>(k.s);
      approx += s * s / static_cast<long double>(k.n);
    }
  }
};

// Exact sign of a.value - b.value; the long double estimate settles all but
// near-ties, which are decided in wide integer arithmetic.
template <std::size_t K>
int compare(const Objective<K>& a, const Objective<K>& b) {
  if (a.cls == b.cls) return 0;
  const long double diff = a.approx - b.approx;
  const long double scale = std::max(a.approx, b.approx);
  if (std::abs(diff) > 1e-10L * scale) return diff > 0 ? 1 : -1;

  auto rational = [](const Objective<K>& o) {
    int512_t num = 0;
    int512_t den = 1;
    for (std::size_t i = 0; i < K; ++i) {
      int512_t term = int512_t(o.cls[i].s) * o.cls[i].s;
      for (std::size_t j = 0; j < K; ++j) {
        if (j != i) term *= o.cls[j].n;
      }
      num += term;
      den *= o.cls[i].n;
    }
    return std::pair{num, den};
  };
  const auto [na, da] = rational(a);
  const auto [nb, db] = rational(b);
  const int512_t lhs = na * db;
  const int512_t rhs = nb * da;
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

struct Prefix {
  std::vector<std::uint64_t> n;  // n[k] = sum of bins[0..k)
  std::vector<std::uint64_t> s;  // s[k] = sum of i * bins[i] for i < k

  explicit Prefix(const std::vector<std::uint64_t>& bins) : n(bins.size() + 1, 0), s(bins.size() + 1, 0) {
    for (std::size_t i = 0; i < bins.size(); ++i) {
      n[i + 1] = n[i] + bins[i];
      s[i + 1] = s[i] + static_cast<std::uint64_t>(i) * bins[i];
    }
  }

  ClassStats range(std::size_t lo, std::size_t hi) const { return {n[hi] - n[lo], s[hi] - s[lo]}; }
};

std::size_t non_empty_bins(const std::vector<std::uint64_t>& bins) {
  return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(), [](std::uint64_t b) { return b > 0; }));
}

}  // namespace

std::size_t DistanceDistribution::bin_of(double v) const {
  const double pos = std::floor(v / bin_width);
  const std::size_t last = bins.size() - 1;
  if (!(pos >= 0.0)) return 0;
  return pos >= static_cast<double>(last) ? last : static_cast<std::size_t>(pos);
}

void bin_distribution(DistanceDistribution& dist, std::size_t bins) {
  if (bins < 2) throw Error(ErrorCode::InvalidConfig, "distance histogram needs at least 2 bins");
  dist.max_value = 0.0;
  for (double v : dist.values) dist.max_value = std::max(dist.max_value, v);
  dist.bin_width = dist.max_value > 0.0 ? dist.max_value / static_cast<double>(bins) : 1.0;
  dist.bins.assign(bins, 0);
  for (double v : dist.values) ++dist.bins[dist.bin_of(v)];
}

DistanceDistribution build_distance_distribution(const ColorPointCloud& target, const SpatialIndex& index,
                                                 std::size_t bins, bool squared) {
  if (target.empty()) throw Error(ErrorCode::EmptyCloud, "target cloud is empty");
  DistanceDistribution dist;
  dist.squared = squared;
  dist.values.resize(target.size());
  dist.nearest.resize(target.size());
  parallel_for(target.size(), [&](std::size_t i) {
    const Neighbor nb = index.nearest(target.positions[i]);
    dist.nearest[i] = nb.index;
    dist.values[i] = squared ? squared_distance(target.positions[i], index.point(nb.index)) : nb.distance;
  });
  bin_distribution(dist, bins);
  return dist;
}

ThresholdSet otsu_two_level(const std::vector<std::uint64_t>& bins, double bin_width) {
  if (non_empty_bins(bins) < 2) {
    throw Error(ErrorCode::DegenerateDistribution, "two-level thresholding needs two non-empty bins");
  }
  const Prefix pre(bins);
  const std::size_t b = bins.size();
  std::size_t best_cut = 0;
  std::optional<Objective<2>> best;
  for (std::size_t k = 1; k < b; ++k) {
    const ClassStats lo = pre.range(0, k);
    const ClassStats hi = pre.range(k, b);
    if (lo.n == 0 || hi.n == 0) continue;
    Objective<2> cand({lo, hi});
    if (!best || compare(cand, *best) > 0) {
      best = cand;
      best_cut = k;
    }
  }
  ThresholdSet t;
  t.kind = ThresholdKind::TwoLevel;
  t.cut1 = best_cut;
  t.t1 = static_cast<double>(best_cut) * bin_width;
  return t;
}

ThresholdSet otsu_two_level(const DistanceDistribution& dist) { return otsu_two_level(dist.bins, dist.bin_width); }

ThresholdSet otsu_three_level(const std::vector<std::uint64_t>& bins, double bin_width) {
  if (non_empty_bins(bins) < 3) {
    throw Error(ErrorCode::DegenerateDistribution, "three-level thresholding needs three non-empty bins");
  }
  const Prefix pre(bins);
  const std::size_t b = bins.size();
  std::size_t best1 = 0;
  std::size_t best2 = 0;
  std::optional<Objective<3>> best;
  for (std::size_t k1 = 1; k1 + 1 < b; ++k1) {
    const ClassStats c0 = pre.range(0, k1);
    if (c0.n == 0) continue;
    for (std::size_t k2 = k1 + 1; k2 < b; ++k2) {
      const ClassStats c1 = pre.range(k1, k2);
      const ClassStats c2 = pre.range(k2, b);
      if (c1.n == 0) continue;
      if (c2.n == 0) break;
      Objective<3> cand({c0, c1, c2});
      if (!best || compare(cand, *best) > 0) {
        best = cand;
        best1 = k1;
        best2 = k2;
      }
    }
  }
  ThresholdSet t;
  t.kind = ThresholdKind::ThreeLevel;
  t.cut1 = best1;
  t.cut2 = best2;
  t.t1 = static_cast<double>(best1) * bin_width;
  t.t2 = static_cast<double>(best2) * bin_width;
  return t;
}

ThresholdSet otsu_three_level(const DistanceDistribution& dist) {
  return otsu_three_level(dist.bins, dist.bin_width);
}

}  // namespace pccolor
