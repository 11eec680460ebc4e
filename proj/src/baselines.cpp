// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/baselines.hpp"

#include <cmath>

#include "pccolor/colorspace.hpp"
#include "pccolor/correction.hpp"
#include "pccolor/error.hpp"
#include "pccolor/kdtree.hpp"
#include "pccolor/parallel.hpp"

namespace pccolor {

namespace {

void require_non_empty(const ColorPointCloud& source, const ColorPointCloud& target) {
  if (source.empty()) throw Error(ErrorCode::EmptyCloud, "source cloud is empty");
  if (target.empty()) throw Error(ErrorCode::EmptyCloud, "target cloud is empty");
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Population moments of one channel.
Moments channel_moments(const ColorPointCloud& cloud, std::size_t ch) {
  double sum = 0.0;
  for (const Rgb& c : cloud.colors) sum += c[ch];
  const double n = static_cast<double>(cloud.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (const Rgb& c : cloud.colors) {
    const double d = c[ch] - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

ColorPointCloud nn_correct(const ColorPointCloud& source, const ColorPointCloud& target) {
  require_non_empty(source, target);
  const SpatialIndex index = build_index(source);
  ColorPointCloud out = target;
  parallel_for(target.size(), [&](std::size_t i) {
    out.colors[i] = source.colors[index.nearest(target.positions[i]).index];
  });
  return out;
}

ColorPointCloud knn_correct(const ColorPointCloud& source, const ColorPointCloud& target, std::size_t k) {
  require_non_empty(source, target);
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "k must be positive");
  const SpatialIndex index = build_index(source);
  ColorPointCloud out = target;
  parallel_for(target.size(), [&](std::size_t i) {
    const auto nbs = index.k_nearest(target.positions[i], k);
    std::array<double, 3> sum{};
    for (const Neighbor& nb : nbs) {
      for (std::size_t ch = 0; ch < 3; ++ch) sum[ch] += source.colors[nb.index][ch];
    }
    for (std::size_t ch = 0; ch < 3; ++ch) {
      out.colors[i][ch] = round_clamp(sum[ch] / static_cast<double>(nbs.size()));
    }
  });
  return out;
}

ColorPointCloud hm_correct(const ColorPointCloud& source, const ColorPointCloud& target) {
  require_non_empty(source, target);
  ColorPointCloud out = target;
  for (Channel channel : kChannels) {
    const auto ch = static_cast<std::size_t>(channel);
    const auto table = he_table(cumulative(build_histogram(target.colors, channel)),
                                cumulative(build_histogram(source.colors, channel)));
    for (Rgb& c : out.colors) c[ch] = table[c[ch]];
  }
  return out;
}

ColorPointCloud agl_correct(const ColorPointCloud& source, const ColorPointCloud& target) {
  require_non_empty(source, target);
  ColorPointCloud out = target;
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const Moments s = channel_moments(source, ch);
    const Moments t = channel_moments(target, ch);
    for (Rgb& c : out.colors) {
      const double mapped = t.stddev > 0.0 ? (c[ch] - t.mean) * (s.stddev / t.stddev) + s.mean : s.mean;
      c[ch] = round_clamp(mapped);
    }
  }
  return out;
}

}  // namespace pccolor
