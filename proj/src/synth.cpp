// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pccolor/correction.hpp"
#include "pccolor/error.hpp"

namespace pccolor {

namespace {

// Hand-rolled draws on top of mt19937_64 so the streams are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (spare_) {
      spare_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * std::numbers::pi * u2);
    spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  bool spare_ = false;
  double cached_ = 0.0;
};

struct Wave {
  double amplitude;
  double fx;
  double fy;
  double phase;
};

}  // namespace

void SynthSpec::validate() const {
  if (points == 0) throw Error(ErrorCode::InvalidSpec, "points must be positive");
  if (!(overlap > 0.0 && overlap <= 1.0)) throw Error(ErrorCode::InvalidSpec, "overlap must lie in (0, 1]");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw Error(ErrorCode::InvalidSpec, "noise must be >= 0");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw Error(ErrorCode::InvalidSpec, "extent must be positive");
  for (std::size_t c = 0; c < 3; ++c) {
    if (!(gain[c] > 0.0) || !std::isfinite(gain[c])) throw Error(ErrorCode::InvalidSpec, "gain must be positive");
    if (!std::isfinite(bias[c])) throw Error(ErrorCode::InvalidSpec, "bias must be finite");
  }
}

SynthPair generate_pair(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  // Three waves per channel. Each wave completes a whole number of cycles
  // along x per extent, so every extent-wide window of the strip has the same
  // mean color and the source is a fair color reference for the target.
  std::array<std::array<Wave, 3>, 3> texture{};
  constexpr std::array<double, 3> kAmplitude{50.0, 30.0, 20.0};
  for (auto& channel : texture) {
    for (std::size_t j = 0; j < channel.size(); ++j) {
      const double cycles_x = std::floor(rng.uniform(2.0, 7.0));
      const double cycles_y = std::floor(rng.uniform(-6.0, 7.0));
      channel[j] = Wave{kAmplitude[j], cycles_x / spec.extent, cycles_y / spec.extent,
                        rng.uniform(0.0, 2.0 * std::numbers::pi)};
    }
  }
  auto true_color = [&](double x, double y) {
    Rgb c;
    for (std::size_t ch = 0; ch < 3; ++ch) {
      double v = 128.0;
      for (const Wave& w : texture[ch]) {
        v += w.amplitude * std::sin(2.0 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
      }
      c[ch] = round_clamp(v);
    }
    return c;
  };

  const double shift = (1.0 - spec.overlap) * spec.extent;
  const double length = spec.extent + shift;
  const auto total = static_cast<std::size_t>(std::llround(static_cast<double>(spec.points) * length / spec.extent));

  SynthPair pair;
  pair.source.reserve(spec.points);
  pair.target.reserve(spec.points);
  pair.target_truth.reserve(spec.points);
  for (std::size_t i = 0; i < total; ++i) {
    const double x = rng.uniform(0.0, length);
    const double y = rng.uniform(0.0, spec.extent);
    const double z = 0.05 * spec.extent * std::sin(2.0 * std::numbers::pi * x / spec.extent) *
                     std::cos(std::numbers::pi * y / spec.extent);
    const Vec3 p{x, y, z};
    const Rgb c = true_color(x, y);
    const bool in_source = x < spec.extent;
    const bool in_target = x >= shift;
    if (in_source) pair.source.add(p, c);
    if (in_target) {
      Rgb distorted;
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double noise = spec.noise_std > 0.0 ? spec.noise_std * rng.normal() : 0.0;
        distorted[ch] = round_clamp(spec.gain[ch] * c[ch] + spec.bias[ch] + noise);
      }
      pair.target.add(p, distorted);
      pair.target_truth.add(p, c);
      if (in_source) ++pair.overlap_points;
    }
  }
  return pair;
}

}  // namespace pccolor
