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

#include "slp/signal_model.hpp"
#include "test_support.hpp"

namespace slp {
namespace {

TEST(RayleighChannel, DeterministicGivenStream) {
  CounterRng a(stream_key(42, {1}));
  CounterRng b(stream_key(42, {1}));
  EXPECT_EQ(draw_rayleigh_channel(1, 1, a).entries()(0, 0),
            draw_rayleigh_channel(1, 1, b).entries()(0, 0));
}

TEST(RayleighChannel, ShapeAndFiniteness) {
  CounterRng rng(stream_key(3, {}));
  const auto h = draw_rayleigh_channel(8, 8, rng);
  EXPECT_EQ(h.users(), 8);
  EXPECT_EQ(h.antennas(), 8);
  EXPECT_TRUE(h.entries().allFinite());
  EXPECT_THROW(draw_rayleigh_channel(4, 3, rng), std::invalid_argument);
}

TEST(RayleighChannel, UnitAveragePower) {
  CounterRng rng(stream_key(11, {}));
  const int n = 1'000'000;
  double sum = 0.0;
  Complex mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex z = draw_rayleigh_channel(1, 1, rng).entries()(0, 0);
    sum += std::norm(z);
    mean += z;
  }
  EXPECT_NEAR(sum / n, 1.0, 0.01);
  EXPECT_NEAR(std::abs(mean / double(n)), 0.0, 0.01);
}

TEST(LiftSlot, IdentityChannel) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  const ChannelMatrix h(MatrixXcd::Ones(1, 1));
  const std::vector<Complex> s{{1.0, 1.0}};
  const auto slot = lift_slot(h, s, spec, 0.1, 1.0);
  EXPECT_EQ(slot.f.col(0), (VectorXd(2) << 1.0, 0.0).finished());
  EXPECT_EQ(slot.g.col(0), (VectorXd(2) << 0.0, 1.0).finished());
}

TEST(LiftSlot, ThirdQuadrantFlipsChannel) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  const ChannelMatrix h(MatrixXcd::Ones(1, 1));
  const std::vector<Complex> s{{-1.0, -1.0}};
  const auto slot = lift_slot(h, s, spec, 0.1, 1.0);
  EXPECT_EQ(slot.f.col(0), (VectorXd(2) << -1.0, 0.0).finished());
  EXPECT_EQ(slot.g.col(0), (VectorXd(2) << 0.0, -1.0).finished());
}

TEST(LiftSlot, RejectsOffGridSymbol) {
  const auto spec = build_constellation(16, Normalization::unit_d, 1.0);
  const ChannelMatrix h(MatrixXcd::Ones(1, 1));
  const std::vector<Complex> s{{0.5, 1.0}};
  EXPECT_THROW(lift_slot(h, s, spec, 0.1, 1.0), std::invalid_argument);
}

TEST(LiftSlot, MatchesComplexArithmetic) {
  const auto spec = build_constellation(64, Normalization::unit_energy);
  CounterRng rng(stream_key(5, {}));
  for (int trial = 0; trial < 50; ++trial) {
    const double p_t = 0.5 + trial * 0.1;
    auto inst = testing::random_instance(rng, spec, 4, 6, 0.3, p_t);
    VectorXcd x(6);
    for (int n = 0; n < 6; ++n) x(n) = complex_gaussian(rng);
    const VectorXd xb = lift_signal(x, p_t);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      // h_hat_k = h_k e^{-j theta_k}
      const Complex rot = std::polar(1.0, -inst.slot.rot[k].theta);
      Complex hx = 0.0;
      for (int n = 0; n < 6; ++n) hx += inst.channel.entries()(k, n) * rot * x(n);
      worst = std::max(worst, std::abs(inst.slot.f.col(k).dot(xb) - hx.real()));
      worst = std::max(worst, std::abs(inst.slot.g.col(k).dot(xb) - hx.imag()));
      EXPECT_NEAR(inst.slot.f.col(k).dot(inst.slot.g.col(k)), 0.0, 1e-12);
      EXPECT_NEAR(inst.slot.f.col(k).norm(),
                  std::sqrt(p_t) * inst.channel.entries().row(k).norm(), 1e-12);
      EXPECT_NEAR(inst.slot.g.col(k).norm(), inst.slot.f.col(k).norm(), 1e-12);
    }
    EXPECT_LT(worst, 1e-12);
    // Lifting isometry: ||x_bar|| = 1 iff ||x||^2 = p_t.
    const VectorXcd xu = x * (std::sqrt(p_t) / x.norm());
    EXPECT_NEAR(lift_signal(xu, p_t).norm(), 1.0, 1e-12);
    EXPECT_LT((unlift_signal(lift_signal(x, p_t), p_t) - x).norm(), 1e-12);
  }
}

TEST(LiftSlot, WithBudgetRescales) {
  const auto spec = build_constellation(16, Normalization::unit_energy);
  CounterRng rng(stream_key(6, {}));
  auto inst = testing::random_instance(rng, spec, 3, 4, 0.2, 1.0);
  const auto moved = with_budget(inst.slot, 2.25);
  const auto direct = lift_slot(inst.channel, inst.symbols, spec, 0.2, 2.25);
  EXPECT_LT((moved.f - direct.f).norm(), 1e-14);
  EXPECT_LT((moved.g - direct.g).norm(), 1e-14);
}

TEST(ReceivedSignal, NoiselessAndScaling) {
  CounterRng rng(stream_key(8, {}));
  const auto h = draw_rayleigh_channel(3, 4, rng);
  VectorXcd x(4);
  VectorXcd n(3);
  for (int i = 0; i < 4; ++i) x(i) = complex_gaussian(rng);
  for (int i = 0; i < 3; ++i) n(i) = complex_gaussian(rng);
  const VectorXcd zero = VectorXcd::Zero(3);
  EXPECT_LT((received_signal(h, x, zero, 1.0) - h.entries() * x).norm(), 1e-15);
  EXPECT_LT((received_signal(h, VectorXcd::Zero(4), n, 2.0) - n / 2.0).norm(), 1e-15);
  EXPECT_EQ(received_signal(h, x, n, 2.0), received_signal(h, x, n, 1.0) / 2.0);
  EXPECT_THROW(received_signal(h, x, n, 0.0), std::invalid_argument);
}

TEST(ReceivedSignal, RotatedNoiseKeepsPerDimensionVariance) {
  CounterRng rng(stream_key(9, {}));
  const double sigma = 0.7;
  const int draws = 200000;
  for (int k = 0; k < 4; ++k) {
    double re2 = 0.0;
    double im2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Complex n = rotate_quarter_turns(complex_gaussian(rng, sigma * sigma), k);
      re2 += n.real() * n.real();
      im2 += n.imag() * n.imag();
    }
    EXPECT_NEAR(re2 / draws, sigma * sigma / 2, 0.01);
    EXPECT_NEAR(im2 / draws, sigma * sigma / 2, 0.01);
  }
}

}  // namespace
}  // namespace slp
