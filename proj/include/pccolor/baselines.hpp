// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "pccolor/cloud.hpp"

namespace pccolor {

// Classical comparison methods. Each returns a copy of `target` with new
// colors and throws EmptyCloud if either cloud is empty.

/// Color of the nearest source point.
ColorPointCloud nn_correct(const ColorPointCloud& source_aligned, const ColorPointCloud& target);

/// Unweighted per-channel mean of the k nearest source colors.
ColorPointCloud knn_correct(const ColorPointCloud& source_aligned, const ColorPointCloud& target, std::size_t k);

/// Whole-cloud histogram matching of every channel onto the source.
ColorPointCloud hm_correct(const ColorPointCloud& source_aligned, const ColorPointCloud& target);

/// Global mean/standard-deviation transfer per channel. Only the global
/// linear stage of the auto-adapting global-to-local method is implemented.
ColorPointCloud agl_correct(const ColorPointCloud& source_aligned, const ColorPointCloud& target);

}  // namespace pccolor
