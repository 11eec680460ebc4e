// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>

#include "pccolor/cloud.hpp"
#include "pccolor/kdtree.hpp"

namespace pccolor {

/// Per-point PSNR ceiling, used when a point matches its reference exactly.
inline constexpr double kPsnrClamp = 100.0;

enum class CpsnrMode {
  PerPoint,  // mean of per-point PSNR values
  Pooled,    // PSNR of the mean per-point CMSE
};

struct MetricReport {
  double cmd = 0.0;
  double cpsnr = 0.0;
  std::array<double, 3> corrected_mean{};
  std::array<double, 3> source_mean{};
  std::size_t points = 0;
};

std::array<double, 3> channel_means(const ColorPointCloud& cloud);

/// Mean over R, G, B of |mean(corrected) - mean(source)|. Throws EmptyCloud.
double cmd(const ColorPointCloud& corrected, const ColorPointCloud& source_aligned);

/// PSNR against each corrected point's nearest source point, where CMSE is
/// the three-channel mean squared error. `index` must be built over
/// `source_aligned`. Throws EmptyCloud.
double cpsnr(const ColorPointCloud& corrected, const ColorPointCloud& source_aligned, const SpatialIndex& index,
             CpsnrMode mode = CpsnrMode::PerPoint);

MetricReport evaluate(const ColorPointCloud& corrected, const ColorPointCloud& source_aligned,
                      CpsnrMode mode = CpsnrMode::PerPoint);

}  // namespace pccolor
