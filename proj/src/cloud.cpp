// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "pccolor/cloud.hpp"
#include "pccolor/error.hpp"

namespace pccolor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingProperty: return "MissingProperty";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedBody: return "TruncatedBody";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidTransform: return "InvalidTransform";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidCloud: return "InvalidCloud";
  }
  return "Unknown";
}

void validate(const ColorPointCloud& cloud) {
  if (cloud.positions.size() != cloud.colors.size()) {
    throw Error(ErrorCode::InvalidCloud, "position and color counts differ");
  }
  for (const Vec3& p : cloud.positions) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
      throw Error(ErrorCode::InvalidCloud, "non-finite coordinate");
    }
  }
}

}  // namespace pccolor
