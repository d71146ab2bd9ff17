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

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "slp/constellation.hpp"
#include "slp/rng.hpp"

namespace slp {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// K x N downlink channel; row k is h_k^T.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(MatrixXcd entries);

  const MatrixXcd& entries() const { return entries_; }
  int users() const { return static_cast<int>(entries_.rows()); }
  int antennas() const { return static_cast<int>(entries_.cols()); }

 private:
  MatrixXcd entries_;
};

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
Complex complex_gaussian(CounterRng& rng, double variance = 1.0);

/// i.i.d. CN(0, 1) entries.
ChannelMatrix draw_rayleigh_channel(int users, int antennas, CounterRng& rng);

/// Real-lifted data of one symbol slot. Columns of `f` and `g` are f_k and
/// g_k, so f.transpose() * x_bar evaluates Re(h_hat_k^T x) for all users.
struct LiftedSlot {
  MatrixXd f;  // 2N x K
  MatrixXd g;  // 2N x K
  std::vector<RotatedSymbol> rot;
  VectorXd s_hat_r;  // K
  VectorXd s_hat_i;  // K
  VectorXd b_r;      // K, 0/1
  VectorXd b_i;      // K, 0/1
  double sigma = 1.0;
  double d = 1.0;
  double p_t = 1.0;
  int slot_index = 0;

  int users() const { return static_cast<int>(f.cols()); }
  int dim() const { return static_cast<int>(f.rows()); }
};

/// Transmit design of one slot: unit-norm real lift, rescaling factor and
/// the average SER it attains.
struct PrecodeSolution {
  VectorXd x_bar;
  double gamma = 1.0;
  double objective = 0.0;
};

LiftedSlot lift_slot(const ChannelMatrix& h, std::span<const Complex> symbols,
                     const ConstellationSpec& spec, double sigma, double p_t,
                     int slot_index = 0);

/// Same slot under a different power budget (f and g scale with sqrt(p_t)).
LiftedSlot with_budget(const LiftedSlot& slot, double p_t);

/// x_bar = [Re(x); Im(x)] / sqrt(p_t).
VectorXd lift_signal(const VectorXcd& x, double p_t);
/// Inverse of lift_signal.
VectorXcd unlift_signal(const VectorXd& x_bar, double p_t);

/// y_bar_k = (h_k^T x + n_k) / gamma.
VectorXcd received_signal(const ChannelMatrix& h, const VectorXcd& x,
                          const VectorXcd& noise, double gamma);

}  // namespace slp
