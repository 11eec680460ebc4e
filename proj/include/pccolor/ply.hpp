// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>

#include "pccolor/cloud.hpp"

namespace pccolor {

enum class PlyFormat { Ascii, BinaryLittleEndian };

/// Reads PLY 1.0 (ascii or binary_little_endian). Requires float/double
/// x, y, z and uchar red, green, blue on the vertex element; any other vertex
/// properties and any other elements are skipped.
ColorPointCloud read_ply(const std::filesystem::path& path);
ColorPointCloud read_ply(std::istream& in);

/// Always emits properties in the order x y z red green blue. Positions are
/// written as double so a read after write is bit-exact.
void write_ply(const ColorPointCloud& cloud, const std::filesystem::path& path,
               PlyFormat format = PlyFormat::BinaryLittleEndian);
void write_ply(const ColorPointCloud& cloud, std::ostream& out, PlyFormat format);

/// Row-major 4x4 homogeneous rigid motion.
struct RigidTransform {
  std::array<double, 16> m{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};

  static RigidTransform identity() { return {}; }
  static RigidTransform translation(double tx, double ty, double tz);
  /// Rotation of `radians` about the +z axis.
  static RigidTransform rotation_z(double radians);

  double operator()(int row, int col) const { return m[static_cast<std::size_t>(row * 4 + col)]; }
  Vec3 apply(const Vec3& p) const noexcept;
};

/// Throws InvalidTransform unless the rotation block is orthonormal and
/// has determinant +1 (both within 1e-6) and the bottom row is (0,0,0,1).
void validate(const RigidTransform& t);

ColorPointCloud apply_transform(const ColorPointCloud& cloud, const RigidTransform& t);

}  // namespace pccolor
