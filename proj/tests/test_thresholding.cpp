// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pccolor/error.hpp"
#include "pccolor/thresholding.hpp"

using namespace pccolor;

namespace {

std::vector<std::uint64_t> spikes(std::size_t b, std::initializer_list<std::size_t> at) {
  std::vector<std::uint64_t> h(b, 0);
  for (auto i : at) h[i] = 5;
  return h;
}

std::vector<std::uint64_t> random_hist(std::mt19937_64& rng, std::size_t b) {
  std::uniform_int_distribution<int> style(0, 2);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  std::bernoulli_distribution sparse(0.8);
  std::vector<std::uint64_t> h(b);
  const int s = style(rng);
  for (auto& v : h) {
    v = count(rng);
    if (s == 1 && sparse(rng)) v = 0;
    if (s == 2) v %= 4;
  }
  return h;
}

// Between-class variance of the classes induced by cuts, for comparing the
// two- and three-level optima.
long double between_variance(const std::vector<std::uint64_t>& h, std::vector<std::size_t> cuts) {
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(h.size());
  long double n = 0, s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    n += h[i];
    s += static_cast<long double>(i) * h[i];
  }
  const long double mu = s / n;
  long double var = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    long double nk = 0, sk = 0;
    for (std::size_t i = cuts[k]; i < cuts[k + 1]; ++i) {
      nk += h[i];
      sk += static_cast<long double>(i) * h[i];
    }
    if (nk > 0) var += nk / n * (sk / nk - mu) * (sk / nk - mu);
  }
  return var;
}

}  // namespace

TEST_CASE("identity alignment puts all mass in bin 0") {
  ColorPointCloud c;
  for (int i = 0; i < 10; ++i) c.add({double(i), 0, 0}, {0, 0, 0});
  const auto idx = build_index(c);
  const auto d = build_distance_distribution(c, idx, 16);
  CHECK(d.bins[0] == 10);
  CHECK(d.max_value == 0.0);
  for (std::size_t i = 0; i < 10; ++i) CHECK(d.nearest[i] == i);
}

TEST_CASE("analytic binning") {
  DistanceDistribution d;
  d.values = {1.0, 3.0};
  bin_distribution(d, 4);
  CHECK(d.bin_width == 0.75);
  CHECK(d.bins == std::vector<std::uint64_t>{0, 1, 0, 1});
  CHECK(d.bin_of(3.0) == 3);
}

TEST_CASE("histogram matches a recount") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto src = oracle::random_cloud(rng, 300);
    const auto tgt = oracle::random_cloud(rng, 200, 1.5);
    const auto idx = build_index(src);
    for (bool squared : {false, true}) {
      const auto d = build_distance_distribution(tgt, idx, 64, squared);
      std::uint64_t sum = 0;
      for (auto v : d.bins) sum += v;
      CHECK(sum == tgt.size());
      double mx = 0;
      std::vector<double> want(tgt.size());
      for (std::size_t i = 0; i < tgt.size(); ++i) {
        const auto nn = oracle::knn_scan(src.positions, tgt.positions[i], 1).front();
        const double d2 = squared_distance(tgt.positions[i], src.positions[nn.index]);
        want[i] = squared ? d2 : std::sqrt(d2);
        CHECK(d.nearest[i] == nn.index);
        CHECK(d.values[i] == want[i]);
        mx = std::max(mx, want[i]);
      }
      std::vector<std::uint64_t> recount(64, 0);
      for (double v : want) {
        recount[std::min<std::size_t>(static_cast<std::size_t>(std::floor(v / (mx / 64))), 63)]++;
      }
      CHECK(recount == d.bins);
    }
  }
}

TEST_CASE("two-level delta cases") {
  const auto t = otsu_two_level(spikes(256, {10, 200}), 0.5);
  CHECK(t.kind == ThresholdKind::TwoLevel);
  CHECK(t.cut1 == 11);
  CHECK(t.t1 == 5.5);
  CHECK(otsu_two_level({7, 7}, 1.0).cut1 == 1);
  CHECK_THROWS_AS(otsu_two_level(spikes(16, {3}), 1.0), Error);
}

TEST_CASE("three-level delta cases") {
  const auto t = otsu_three_level(spikes(256, {10, 100, 200}), 1.0);
  CHECK(t.kind == ThresholdKind::ThreeLevel);
  CHECK(t.cut1 == 11);
  CHECK(t.cut2 == 101);
  const auto m = otsu_three_level(spikes(3, {0, 1, 2}), 1.0);
  CHECK(m.cut1 == 1);
  CHECK(m.cut2 == 2);
  CHECK(m.t1 == 1.0);
  CHECK(m.t2 == 2.0);
  CHECK_THROWS_AS(otsu_three_level(spikes(16, {3, 9}), 1.0), Error);
}

TEST_CASE("two-level matches the exhaustive oracle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    auto h = random_hist(rng, 64);
    h[0] += 1;
    h[63] += 1;
    const auto want = oracle::otsu_exhaustive(h, 2);
    REQUIRE(want.size() == 1);
    CHECK(otsu_two_level(h, 1.0).cut1 == want[0]);
  }
}

TEST_CASE("three-level matches the exhaustive oracle") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> size(3, 80);
  for (int trial = 0; trial < 150; ++trial) {
    auto h = random_hist(rng, size(rng));
    h[0] += 1;
    h[h.size() / 2] += 1;
    h.back() += 1;
    const auto want = oracle::otsu_exhaustive(h, 3);
    REQUIRE(want.size() == 2);
    const auto got = otsu_three_level(h, 1.0);
    CHECK(got.cut1 == want[0]);
    CHECK(got.cut2 == want[1]);
  }
}

TEST_CASE("scaling bin counts changes no threshold") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    auto h = random_hist(rng, 48);
    h[1] += 1;
    h[20] += 1;
    h[40] += 1;
    auto scaled = h;
    for (auto& v : scaled) v *= 37;
    CHECK(otsu_two_level(h, 1.0).cut1 == otsu_two_level(scaled, 1.0).cut1);
    const auto a = otsu_three_level(h, 1.0), b = otsu_three_level(scaled, 1.0);
    CHECK(a.cut1 == b.cut1);
    CHECK(a.cut2 == b.cut2);
  }
}

TEST_CASE("induced classes are non-empty and three classes separate at least as well") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    auto h = random_hist(rng, 40);
    h[2] += 1;
    h[19] += 1;
    h[38] += 1;
    const auto two = otsu_two_level(h, 1.0);
    const auto three = otsu_three_level(h, 1.0);
    auto mass = [&](std::size_t lo, std::size_t hi) {
      std::uint64_t s = 0;
      for (std::size_t i = lo; i < hi; ++i) s += h[i];
      return s;
    };
    CHECK(mass(0, two.cut1) > 0);
    CHECK(mass(two.cut1, h.size()) > 0);
    CHECK(mass(0, three.cut1) > 0);
    CHECK(mass(three.cut1, three.cut2) > 0);
    CHECK(mass(three.cut2, h.size()) > 0);
    CHECK(between_variance(h, {three.cut1, three.cut2}) >= between_variance(h, {two.cut1}) * (1 - 1e-12L));
  }
}

TEST_CASE("thresholds are bin upper edges in value units") {
  DistanceDistribution d;
  d.values = {0.0, 0.0, 0.5, 0.5, 2.0, 2.0};
  bin_distribution(d, 8);
  const auto t = otsu_three_level(d);
  CHECK(t.t1 == doctest::Approx(t.cut1 * d.bin_width));
  CHECK(t.t1 > 0.0);
  CHECK(t.t1 <= 0.5);
  CHECK(t.t2 > 0.5);
  CHECK(t.t2 <= 2.0);
}
