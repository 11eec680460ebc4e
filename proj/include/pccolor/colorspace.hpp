// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "pccolor/cloud.hpp"

namespace pccolor {

/// CIE 1976 L*a*b*, D65 white, 2 degree observer.
struct LabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// sRGB (8 bit, gamma encoded) to L*a*b*.
LabColor rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
inline LabColor rgb_to_lab(const Rgb& c) { return rgb_to_lab(c.r, c.g, c.b); }

/// CIE76 color difference (Euclidean distance in L*a*b*).
double delta_e(const LabColor& x, const LabColor& y);

struct ChannelHistogram {
  Channel channel = Channel::R;
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;
};

struct ChannelCdf {
  Channel channel = Channel::R;
  std::array<std::uint64_t, 256> cum{};
  std::uint64_t total = 0;
};

/// Histogram of `channel` over the points listed in `subset` (repeats count
/// repeatedly). Throws IndexOutOfRange for an index past the cloud.
ChannelHistogram build_histogram(const ColorPointCloud& cloud, std::span<const std::size_t> subset, Channel channel);
ChannelHistogram build_histogram(std::span<const Rgb> colors, std::span<const std::size_t> subset, Channel channel);
/// Histogram over every point.
ChannelHistogram build_histogram(std::span<const Rgb> colors, Channel channel);

ChannelCdf cumulative(const ChannelHistogram& h);

/// Histogram-matching lookup: the smallest u whose normalized source mass
/// cdf_s(u)/total_s reaches the normalized target mass cdf_t(c)/total_t.
/// The comparison is done in exact integer arithmetic. Throws
/// EmptyDistribution when either CDF is empty.
std::uint8_t he_map(const ChannelCdf& cdf_t, const ChannelCdf& cdf_s, std::uint8_t c);

/// he_map for every input level at once.
std::array<std::uint8_t, 256> he_table(const ChannelCdf& cdf_t, const ChannelCdf& cdf_s);

}  // namespace pccolor
