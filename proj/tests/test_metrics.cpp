// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pccolor/error.hpp"
#include "pccolor/metrics.hpp"

using namespace pccolor;

namespace {

ColorPointCloud offset_colors(ColorPointCloud c, int delta) {
  for (auto& col : c.colors)
    for (std::size_t ch = 0; ch < 3; ++ch) col[ch] = static_cast<std::uint8_t>(col[ch] + delta);
  return c;
}

double psnr_oracle(const ColorPointCloud& corrected, const ColorPointCloud& source, bool pooled) {
  double sum_psnr = 0, sum_mse = 0;
  for (std::size_t i = 0; i < corrected.size(); ++i) {
    const auto nn = oracle::knn_scan(source.positions, corrected.positions[i], 1).front();
    double mse = 0;
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const double d = double(corrected.colors[i][ch]) - double(source.colors[nn.index][ch]);
      mse += d * d / 3.0;
    }
    sum_mse += mse;
    sum_psnr += mse == 0 ? 100.0 : std::min(100.0, 10 * std::log10(255.0 * 255.0 / mse));
  }
  const double n = static_cast<double>(corrected.size());
  if (pooled) return sum_mse == 0 ? 100.0 : std::min(100.0, 10 * std::log10(255.0 * 255.0 / (sum_mse / n)));
  return sum_psnr / n;
}

}  // namespace

TEST_CASE("cmd") {
  ColorPointCloud a, b;
  a.add({0, 0, 0}, {10, 20, 30});
  a.add({1, 0, 0}, {20, 40, 60});
  b.add({5, 5, 5}, {0, 0, 0});
  b.add({6, 5, 5}, {0, 0, 0});
  CHECK(channel_means(a) == std::array<double, 3>{15, 30, 45});
  CHECK(cmd(a, b) == doctest::Approx(30.0));
  CHECK(cmd(a, a) == 0.0);
  CHECK(cmd(offset_colors(a, 3), a) == 3.0);
  CHECK_THROWS_AS(cmd(ColorPointCloud{}, a), Error);
}

TEST_CASE("cmd is permutation invariant") {
  std::mt19937_64 rng(61);
  auto a = oracle::random_cloud(rng, 1000);
  const auto b = oracle::random_cloud(rng, 700);
  const double before = cmd(a, b);
  std::shuffle(a.colors.begin(), a.colors.end(), rng);
  CHECK(std::abs(cmd(a, b) - before) < 1e-12);
}

TEST_CASE("cpsnr fixed cases") {
  std::mt19937_64 rng(62);
  auto src = oracle::random_cloud(rng, 500);
  for (auto& col : src.colors)
    for (std::size_t ch = 0; ch < 3; ++ch) col[ch] = std::clamp<std::uint8_t>(col[ch], 1, 254);
  const auto idx = build_index(src);
  CHECK(cpsnr(src, src, idx) == kPsnrClamp);
  CHECK(cpsnr(src, src, idx, CpsnrMode::Pooled) == kPsnrClamp);
  const double want = 10 * std::log10(65025.0);
  CHECK(cpsnr(offset_colors(src, 1), src, idx) == doctest::Approx(want).epsilon(1e-12));
  CHECK(cpsnr(offset_colors(src, -1), src, idx, CpsnrMode::Pooled) == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(48.13).epsilon(1e-4));
}

TEST_CASE("cpsnr matches a per-point recomputation") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 5; ++trial) {
    const auto src = oracle::random_cloud(rng, 400);
    auto out = oracle::random_cloud(rng, 300);
    out.positions[0] = src.positions[0];
    out.colors[0] = src.colors[0];
    const auto idx = build_index(src);
    for (bool pooled : {false, true}) {
      const double got = cpsnr(out, src, idx, pooled ? CpsnrMode::Pooled : CpsnrMode::PerPoint);
      CHECK(std::abs(got - psnr_oracle(out, src, pooled)) < 1e-9);
    }
  }
}

TEST_CASE("cpsnr decreases as one error grows") {
  ColorPointCloud src, out;
  for (int i = 0; i < 4; ++i) {
    src.add({double(i), 0, 0}, {100, 100, 100});
    out.add({double(i), 0, 0}, {101, 100, 100});
  }
  const auto idx = build_index(src);
  double prev = cpsnr(out, src, idx);
  for (int e = 2; e < 100; ++e) {
    out.colors[2].r = static_cast<std::uint8_t>(100 + e);
    const double now = cpsnr(out, src, idx);
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("evaluate bundles both metrics") {
  std::mt19937_64 rng(64);
  const auto src = oracle::random_cloud(rng, 300);
  const auto m = evaluate(offset_colors(src, 0), src);
  CHECK(m.points == 300);
  CHECK(m.cmd == 0.0);
  CHECK(m.cpsnr == kPsnrClamp);
  CHECK(m.source_mean == channel_means(src));
}
