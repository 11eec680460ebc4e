// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "pccolor/cloud.hpp"

namespace pccolor {

/// Parameters of a synthetic aligned pair. Colors of the target are
/// clamp(round(gain * c + bias + N(0, noise_std))) per channel.
struct SynthSpec {
  std::size_t points = 20000;  // per cloud, approximately
  double overlap = 0.7;        // fraction of the target that lies over the source, (0, 1]
  std::array<double, 3> bias{0.0, 0.0, 0.0};
  std::array<double, 3> gain{1.0, 1.0, 1.0};
  double noise_std = 0.0;
  std::uint64_t seed = 1;
  double extent = 1.0;  // side of the source patch, meters

  /// Throws InvalidSpec.
  void validate() const;
};

struct SynthPair {
  ColorPointCloud source;
  ColorPointCloud target;
  ColorPointCloud target_truth;  // target geometry with undistorted colors
  std::size_t overlap_points = 0;
};

/// Samples a gently curved strip with a smooth color texture, keeps the
/// first `extent` meters as the source and a same-sized window shifted by
/// (1 - overlap) * extent as the target. Target points inside the source
/// window are exact copies of source points. Deterministic for a given spec.
SynthPair generate_pair(const SynthSpec& spec);

}  // namespace pccolor
