// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/metrics.hpp"

#include <cmath>
#include <span>
#include <vector>

#include "pccolor/error.hpp"
#include "pccolor/parallel.hpp"

namespace pccolor {

namespace {

// Neumaier-compensated sum in index order, so the result never depends on
// how the per-point terms were produced.
double ordered_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

constexpr double kPeak2 = 255.0 * 255.0;

double psnr_of(double cmse) { return cmse > 0.0 ? std::min(kPsnrClamp, 10.0 * std::log10(kPeak2 / cmse)) : kPsnrClamp; }

}  // namespace

std::array<double, 3> channel_means(const ColorPointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "cannot average an empty cloud");
  std::array<std::uint64_t, 3> sum{};
  for (const Rgb& c : cloud.colors) {
    sum[0] += c.r;
    sum[1] += c.g;
    sum[2] += c.b;
  }
  const double n = static_cast<double>(cloud.size());
  return {static_cast<double>(sum[0]) / n, static_cast<double>(sum[1]) / n, static_cast<double>(sum[2]) / n};
}

double cmd(const ColorPointCloud& corrected, const ColorPointCloud& source) {
  const auto a = channel_means(corrected);
  const auto b = channel_means(source);
  return (std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2])) / 3.0;
}

double cpsnr(const ColorPointCloud& corrected, const ColorPointCloud& source, const SpatialIndex& index,
             CpsnrMode mode) {
  if (corrected.empty()) throw Error(ErrorCode::EmptyCloud, "corrected cloud is empty");
  if (source.empty()) throw Error(ErrorCode::EmptyCloud, "source cloud is empty");
  std::vector<double> cmse(corrected.size());
  parallel_for(corrected.size(), [&](std::size_t i) {
    const Rgb& ref = source.colors[index.nearest(corrected.positions[i]).index];
    const Rgb& c = corrected.colors[i];
    double acc = 0.0;
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const double d = static_cast<double>(c[ch]) - static_cast<double>(ref[ch]);
      acc += d * d;
    }
    cmse[i] = acc / 3.0;
  });
  const double n = static_cast<double>(corrected.size());
  if (mode == CpsnrMode::Pooled) return psnr_of(ordered_sum(cmse) / n);
  for (double& v : cmse) v = psnr_of(v);
  return ordered_sum(cmse) / n;
}

MetricReport evaluate(const ColorPointCloud& corrected, const ColorPointCloud& source, CpsnrMode mode) {
  MetricReport r;
  r.corrected_mean = channel_means(corrected);
  r.source_mean = channel_means(source);
  r.cmd = cmd(corrected, source);
  const SpatialIndex index = build_index(source);
  r.cpsnr = cpsnr(corrected, source, index, mode);
  r.points = corrected.size();
  return r;
}

}  // namespace pccolor
