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

#include "slp/signal_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace slp {

ChannelMatrix::ChannelMatrix(MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1) throw std::invalid_argument("channel needs at least one user");
  if (entries_.cols() < entries_.rows()) {
    throw std::invalid_argument("channel needs N >= K (got K=" +
                                std::to_string(entries_.rows()) +
                                ", N=" + std::to_string(entries_.cols()) + ")");
  }
  if (!entries_.allFinite()) throw std::invalid_argument("channel has non-finite entries");
}

Complex complex_gaussian(CounterRng& rng, double variance) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

ChannelMatrix draw_rayleigh_channel(int users, int antennas, CounterRng& rng) {
  if (users < 1 || antennas < users) {
    throw std::invalid_argument("Rayleigh channel needs N >= K >= 1");
  }
  MatrixXcd h(users, antennas);
  for (int k = 0; k < users; ++k) {
    for (int n = 0; n < antennas; ++n) h(k, n) = complex_gaussian(rng);
  }
  return ChannelMatrix(std::move(h));
}

LiftedSlot lift_slot(const ChannelMatrix& h, std::span<const Complex> symbols,
                     const ConstellationSpec& spec, double sigma, double p_t,
                     int slot_index) {
  const int users = h.users();
  const int n = h.antennas();
  if (static_cast<int>(symbols.size()) != users) {
    throw std::invalid_argument("expected one symbol per user");
  }
  if (!(sigma > 0.0) || !(p_t > 0.0)) {
    throw std::invalid_argument("sigma and power budget must be positive");
  }

  LiftedSlot slot;
  slot.f.resize(2 * n, users);
  slot.g.resize(2 * n, users);
  slot.s_hat_r.resize(users);
  slot.s_hat_i.resize(users);
  slot.b_r.resize(users);
  slot.b_i.resize(users);
  slot.rot.reserve(users);
  slot.sigma = sigma;
  slot.d = spec.half_distance;
  slot.p_t = p_t;
  slot.slot_index = slot_index;

  const double amp = std::sqrt(p_t);
  for (int k = 0; k < users; ++k) {
    const RotatedSymbol r = rotate_symbol(symbols[k], spec);
    for (int i = 0; i < n; ++i) {
      const Complex hh = rotate_quarter_turns(h.entries()(k, i), r.quarter_turns);
      slot.f(i, k) = amp * hh.real();
      slot.f(n + i, k) = -amp * hh.imag();
      slot.g(i, k) = amp * hh.imag();
      slot.g(n + i, k) = amp * hh.real();
    }
    slot.s_hat_r(k) = r.s_hat_r;
    slot.s_hat_i(k) = r.s_hat_i;
    slot.b_r(k) = r.b_r;
    slot.b_i(k) = r.b_i;
    slot.rot.push_back(r);
  }
  return slot;
}

LiftedSlot with_budget(const LiftedSlot& slot, double p_t) {
  if (!(p_t > 0.0)) throw std::invalid_argument("power budget must be positive");
  LiftedSlot out = slot;
  const double scale = std::sqrt(p_t / slot.p_t);
  out.f *= scale;
  out.g *= scale;
  out.p_t = p_t;
  return out;
}

VectorXd lift_signal(const VectorXcd& x, double p_t) {
  const Eigen::Index n = x.size();
  VectorXd out(2 * n);
  out.head(n) = x.real();
  out.tail(n) = x.imag();
  return out / std::sqrt(p_t);
}

VectorXcd unlift_signal(const VectorXd& x_bar, double p_t) {
  const Eigen::Index n = x_bar.size() / 2;
  const double amp = std::sqrt(p_t);
  VectorXcd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = amp * Complex(x_bar(i), x_bar(n + i));
  return out;
}

VectorXcd received_signal(const ChannelMatrix& h, const VectorXcd& x,
                          const VectorXcd& noise, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("rescaling factor must be positive");
  if (x.size() != h.antennas() || noise.size() != h.users()) {
    throw std::invalid_argument("dimension mismatch in received_signal");
  }
  return (h.entries() * x + noise) / gamma;
}

}  // namespace slp
