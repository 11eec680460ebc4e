// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pccolor {

using Vec3 = std::array<double, 3>;

enum class Channel : std::uint8_t { R = 0, G = 1, B = 2 };

inline constexpr std::array<Channel, 3> kChannels{Channel::R, Channel::G, Channel::B};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::uint8_t operator[](std::size_t channel) const noexcept {
    return channel == 0 ? r : (channel == 1 ? g : b);
  }
  std::uint8_t& operator[](std::size_t channel) noexcept {
    return channel == 0 ? r : (channel == 1 ? g : b);
  }
  std::uint8_t operator[](Channel channel) const noexcept { return (*this)[static_cast<std::size_t>(channel)]; }
  std::uint8_t& operator[](Channel channel) noexcept { return (*this)[static_cast<std::size_t>(channel)]; }

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Positions (meters) and 8-bit colors stored as parallel arrays. Index i of
/// both arrays describes point i; point order is never changed by the library.
struct ColorPointCloud {
  std::vector<Vec3> positions;
  std::vector<Rgb> colors;

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }

  void reserve(std::size_t n) {
    positions.reserve(n);
    colors.reserve(n);
  }
  void add(const Vec3& p, const Rgb& c) {
    positions.push_back(p);
    colors.push_back(c);
  }

  friend bool operator==(const ColorPointCloud&, const ColorPointCloud&) = default;
};

/// Throws InvalidCloud when the parallel arrays disagree in length or a
/// coordinate is not finite.
void validate(const ColorPointCloud& cloud);

inline double squared_distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace pccolor
