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

#include "slp/baselines.hpp"
#include "test_support.hpp"

namespace slp {
namespace {

const ConstellationSpec kSpec = build_constellation(16, Normalization::unit_energy);

TEST(LinearPrecode, IdentityChannelZf) {
  CounterRng rng(stream_key(41, {}));
  const ChannelMatrix h(MatrixXcd::Identity(4, 4));
  const auto s = testing::random_symbols(rng, kSpec, 4);
  const Eigen::Map<const VectorXcd> sv(s.data(), 4);
  const double p_t = 2.0;
  const auto r = linear_precode(h, s, p_t, 0.1, LinearPrecoder::zf);
  EXPECT_LT((r.x - std::sqrt(p_t) * sv / sv.norm()).norm(), 1e-14);
  EXPECT_NEAR(r.gamma, std::sqrt(p_t) / sv.norm(), 1e-14);
  const VectorXcd y = received_signal(h, r.x, VectorXcd::Zero(4), r.gamma);
  EXPECT_LT((y - sv).norm(), 1e-14);
}

TEST(LinearPrecode, ZfRemovesInterference) {
  CounterRng rng(stream_key(42, {}));
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 8;
    const auto h = draw_rayleigh_channel(k, k + trial % 3, rng);
    const auto s = testing::random_symbols(rng, kSpec, k);
    const LinearPrecoderMatrix zf(h, LinearPrecoderKind::zero_forcing());
    EXPECT_LT((h.entries() * zf.weights() - MatrixXcd::Identity(k, k)).norm(), 1e-10);
    const auto r = zf.precode(s, 1.0);
    const VectorXcd y = h.entries() * r.x / r.gamma;
    for (int u = 0; u < k; ++u) EXPECT_LT(std::abs(y(u) - s[u]), 1e-10);
    EXPECT_NEAR(r.x.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(LinearPrecode, PowerIsExactForBothKinds) {
  CounterRng rng(stream_key(43, {}));
  for (auto kind : {LinearPrecoder::zf, LinearPrecoder::rzf}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = draw_rayleigh_channel(4, 6, rng);
      const auto s = testing::random_symbols(rng, kSpec, 4);
      const double p_t = 0.3 + trial;
      const auto r = linear_precode(h, s, p_t, 0.3, kind);
      EXPECT_NEAR(r.x.squaredNorm(), p_t, 1e-12 * p_t);
      EXPECT_GT(r.gamma, 0.0);
    }
  }
}

TEST(LinearPrecode, RzfConvergesToZfAtLowNoise) {
  CounterRng rng(stream_key(44, {}));
  const auto h = draw_rayleigh_channel(4, 4, rng);
  const auto s = testing::random_symbols(rng, kSpec, 4);
  const auto zf = linear_precode(h, s, 1.0, 1e-8, LinearPrecoder::zf);
  const auto rzf = linear_precode(h, s, 1.0, 1e-8, LinearPrecoder::rzf);
  EXPECT_LT((zf.x - rzf.x).norm(), 1e-6);
  EXPECT_NEAR(zf.gamma, rzf.gamma, 1e-6);
  const auto rzf_noisy = linear_precode(h, s, 1.0, 0.5, LinearPrecoder::rzf);
  EXPECT_GT((zf.x - rzf_noisy.x).norm(), 1e-3);
}

TEST(LinearPrecode, RzfGammaIsMeanDiagonalGain) {
  CounterRng rng(stream_key(45, {}));
  const auto h = draw_rayleigh_channel(3, 5, rng);
  const auto s = testing::random_symbols(rng, kSpec, 3);
  const auto kind = LinearPrecoderKind::regularized(3, 0.4);
  EXPECT_DOUBLE_EQ(kind.regularization, 3 * 0.16);
  const LinearPrecoderMatrix rzf(h, kind);
  const auto r = rzf.precode(s, 1.0);
  const Eigen::Map<const VectorXcd> sv(s.data(), 3);
  const double beta = 1.0 / (rzf.weights() * sv).norm();
  const double gain = (h.entries() * rzf.weights()).diagonal().real().mean();
  EXPECT_NEAR(r.gamma, beta * gain, 1e-13);
}

TEST(LinearPrecode, SingularChannelRejected) {
  MatrixXcd hm(2, 2);
  hm << 1.0, 2.0, 2.0, 4.0;
  const ChannelMatrix h(hm);
  EXPECT_THROW(LinearPrecoderMatrix(h, LinearPrecoderKind::zero_forcing()), std::runtime_error);
  // Regularization restores invertibility.
  EXPECT_NO_THROW(LinearPrecoderMatrix(h, LinearPrecoderKind::regularized(2, 0.5)));
}

}  // namespace
}  // namespace slp
