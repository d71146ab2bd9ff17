// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <numbers>

#include "slp/constellation.hpp"

namespace slp {
namespace {

TEST(Constellation, QpskGeometry) {
  const auto spec = build_constellation(4, Normalization::unit_d, 1.0);
  EXPECT_EQ(spec.levels, (std::vector<double>{-1.0, 1.0}));
  EXPECT_DOUBLE_EQ(spec.avg_energy, 2.0);
}

TEST(Constellation, SixteenQamEnergyMatchesEnumeration) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  EXPECT_EQ(spec.levels, (std::vector<double>{-3.0, -1.0, 1.0, 3.0}));
  double sum = 0.0;
  for (int re = -3; re <= 3; re += 2) {
    for (int im = -3; im <= 3; im += 2) sum += re * re + im * im;
  }
  EXPECT_DOUBLE_EQ(sum / 16.0, 10.0);
  EXPECT_DOUBLE_EQ(spec.avg_energy, 10.0);
}

TEST(Constellation, UnitEnergyScalesHalfDistance) {
  const auto spec = build_constellation(16, Normalization::unit_energy);
  EXPECT_NEAR(spec.half_distance, 1.0 / std::sqrt(10.0), 1e-15);
  for (int order : {4, 16, 64, 256}) {
    const auto s = build_constellation(order, Normalization::unit_energy);
    double e = 0.0;
    for (const auto& p : s.points()) e += std::norm(p);
    EXPECT_NEAR(e / order, 1.0, 1e-12) << order;
    EXPECT_NEAR(s.avg_energy, 1.0, 1e-12);
    ASSERT_EQ(s.levels_per_dim() * s.levels_per_dim(), order);
    for (int i = 1; i < s.levels_per_dim(); ++i) {
      EXPECT_NEAR(s.levels[i] - s.levels[i - 1], 2.0 * s.half_distance, 1e-14);
      EXPECT_DOUBLE_EQ(s.levels[i], -s.levels[s.levels_per_dim() - 1 - i]);
    }
  }
}

TEST(Constellation, RejectsUnsupportedOrder) {
  EXPECT_THROW(build_constellation(8, Normalization::unit_energy), std::invalid_argument);
  EXPECT_THROW(build_constellation(32, Normalization::unit_energy), std::invalid_argument);
  EXPECT_THROW(build_constellation(16, Normalization::unit_d, 0.0), std::invalid_argument);
}

TEST(RotateSymbol, FirstQuadrantIsIdentity) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  const auto r = rotate_symbol({1.0, 1.0}, spec);
  EXPECT_EQ(r.theta, 0.0);
  EXPECT_EQ(r.s_hat_r, 1.0);
  EXPECT_EQ(r.s_hat_i, 1.0);
  EXPECT_EQ(r.b_r, 1);
  EXPECT_EQ(r.b_i, 1);
}

TEST(RotateSymbol, SecondQuadrantQuarterTurn) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  const auto r = rotate_symbol({-3.0, 1.0}, spec);
  EXPECT_DOUBLE_EQ(r.theta, std::numbers::pi / 2);
  EXPECT_EQ(r.s_hat_r, 1.0);
  EXPECT_EQ(r.s_hat_i, 3.0);
  EXPECT_EQ(r.b_r, 1);
  EXPECT_EQ(r.b_i, 0);
}

TEST(RotateSymbol, ThirdQuadrantSignFlip) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  const auto r = rotate_symbol({-1.0, -1.0}, spec);
  EXPECT_DOUBLE_EQ(r.theta, std::numbers::pi);
  EXPECT_EQ(r.s_hat_r, 1.0);
  EXPECT_EQ(r.s_hat_i, 1.0);
}

TEST(RotateSymbol, RejectsOffGridSymbols) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  EXPECT_THROW(rotate_symbol({2.0, 1.0}, spec), std::invalid_argument);
  EXPECT_THROW(rotate_symbol({5.0, 1.0}, spec), std::invalid_argument);
  EXPECT_THROW(rotate_symbol({0.0, 1.0}, spec), std::invalid_argument);
}

TEST(RotateSymbol, PropertiesOverAllPoints) {
  for (int order : {4, 16, 64, 256}) {
    const auto spec = build_constellation(order, Normalization::unit_energy);
    int inner_r = 0;
    for (const Complex s : spec.points()) {
      const auto r = rotate_symbol(s, spec);
      EXPECT_GT(r.s_hat_r, 0.0);
      EXPECT_GT(r.s_hat_i, 0.0);
      EXPECT_NEAR(std::remainder(r.theta, std::numbers::pi / 2), 0.0, 1e-15);
      // Round trip: s_hat * e^{j theta} == s.
      const Complex back = Complex(r.s_hat_r, r.s_hat_i) * std::polar(1.0, r.theta);
      EXPECT_NEAR(std::abs(back - s), 0.0, 1e-12);
      // The rotated parts are the magnitudes of the original parts.
      std::multiset<double> a{r.s_hat_r, r.s_hat_i};
      std::multiset<double> b{std::abs(s.real()), std::abs(s.imag())};
      EXPECT_EQ(a, b);
      EXPECT_EQ(r.b_r, spec.is_inner(r.s_hat_r) ? 1 : 0);
      inner_r += r.b_r;
    }
    const double m = std::sqrt(order);
    EXPECT_DOUBLE_EQ(static_cast<double>(inner_r) / order, (m - 2.0) / m) << order;
  }
}

TEST(Demodulate, ExamplesAndTieBreak) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  EXPECT_EQ(demodulate({1.1, 0.9}, spec), Complex(1.0, 1.0));
  EXPECT_EQ(demodulate({100.0, 100.0}, spec), Complex(3.0, 3.0));
  EXPECT_EQ(demodulate({2.0, 1.0}, spec), Complex(1.0, 1.0));
  EXPECT_EQ(demodulate({-2.0, -2.0}, spec), Complex(-1.0, -1.0));
  EXPECT_EQ(demodulate({0.0, 0.0}, spec), demodulate({0.0, 0.0}, spec));
}

TEST(Demodulate, FixedPointsAndMinimumDistance) {
  for (int order : {4, 16, 64}) {
    const auto spec = build_constellation(order, Normalization::unit_energy);
    const auto pts = spec.points();
    for (const Complex s : pts) EXPECT_EQ(demodulate(s, spec), s);

    // Brute-force nearest point agrees with per-dimension slicing.
    std::mt19937_64 rng(order);
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    for (int t = 0; t < 2000; ++t) {
      const Complex y(u(rng), u(rng));
      Complex best = pts.front();
      for (const Complex p : pts) {
        if (std::abs(y - p) < std::abs(y - best)) best = p;
      }
      EXPECT_EQ(demodulate(y, spec), best);
    }
  }
}

}  // namespace
}  // namespace slp
