// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/colorspace.hpp"

#include <algorithm>
#include <cmath>

#include "pccolor/error.hpp"

namespace pccolor {

namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double v = i / 255.0;
      t[static_cast<std::size_t>(i)] = v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double lab_f(double t) { return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0; }

}  // namespace

LabColor rgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const auto& lin = linear_table();
  const double r = lin[r8];
  const double g = lin[g8];
  const double b = lin[b8];
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return LabColor{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double delta_e(const LabColor& x, const LabColor& y) {
  const double dl = x.L - y.L;
  const double da = x.a - y.a;
  const double db = x.b - y.b;
  return std::sqrt(dl * dl + da * da + db * db);
}

ChannelHistogram build_histogram(std::span<const Rgb> colors, std::span<const std::size_t> subset, Channel channel) {
  ChannelHistogram h;
  h.channel = channel;
  const auto ch = static_cast<std::size_t>(channel);
  for (std::size_t i : subset) {
    if (i >= colors.size()) throw Error(ErrorCode::IndexOutOfRange, "histogram subset index " + std::to_string(i));
    ++h.bins[colors[i][ch]];
  }
  h.total = subset.size();
  return h;
}

ChannelHistogram build_histogram(const ColorPointCloud& cloud, std::span<const std::size_t> subset, Channel channel) {
  return build_histogram(std::span<const Rgb>(cloud.colors), subset, channel);
}

ChannelHistogram build_histogram(std::span<const Rgb> colors, Channel channel) {
  ChannelHistogram h;
  h.channel = channel;
  const auto ch = static_cast<std::size_t>(channel);
  for (const Rgb& c : colors) ++h.bins[c[ch]];
  h.total = colors.size();
  return h;
}

ChannelCdf cumulative(const ChannelHistogram& h) {
  ChannelCdf cdf;
  cdf.channel = h.channel;
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < 256; ++k) {
    running += h.bins[k];
    cdf.cum[k] = running;
  }
  cdf.total = h.total;
  return cdf;
}

std::uint8_t he_map(const ChannelCdf& cdf_t, const ChannelCdf& cdf_s, std::uint8_t c) {
  if (cdf_t.total == 0 || cdf_s.total == 0) throw Error(ErrorCode::EmptyDistribution, "empty CDF in he_map");
  using Wide = unsigned __int128;
  // cdf_s(u) / total_s >= cdf_t(c) / total_t, cross-multiplied.
  const Wide target_mass = static_cast<Wide>(cdf_t.cum[c]) * cdf_s.total;
  const auto first = std::partition_point(cdf_s.cum.begin(), cdf_s.cum.end(), [&](std::uint64_t v) {
    return static_cast<Wide>(v) * cdf_t.total < target_mass;
  });
  if (first == cdf_s.cum.end()) return 255;
  return static_cast<std::uint8_t>(first - cdf_s.cum.begin());
}

std::array<std::uint8_t, 256> he_table(const ChannelCdf& cdf_t, const ChannelCdf& cdf_s) {
  std::array<std::uint8_t, 256> table{};
  for (std::size_t c = 0; c < 256; ++c) table[c] = he_map(cdf_t, cdf_s, static_cast<std::uint8_t>(c));
  return table;
}

}  // namespace pccolor
