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

#include <cmath>
#include <random>
#include <vector>

#include "slp/baselines.hpp"
#include "slp/constellation.hpp"
#include "slp/signal_model.hpp"

namespace slp::testing {

struct Instance {
  ChannelMatrix channel;
  std::vector<Complex> symbols;
  LiftedSlot slot;
};

inline std::vector<Complex> random_symbols(CounterRng& rng, const ConstellationSpec& spec,
                                           int users) {
  std::uniform_int_distribution<int> pick(0, spec.order - 1);
  std::vector<Complex> s(users);
  for (auto& v : s) v = spec.point(pick(rng));
  return s;
}

inline Instance random_instance(CounterRng& rng, const ConstellationSpec& spec, int users,
                                int antennas, double sigma, double p_t = 1.0) {
  ChannelMatrix h = draw_rayleigh_channel(users, antennas, rng);
  std::vector<Complex> s = random_symbols(rng, spec, users);
  LiftedSlot slot = lift_slot(h, s, spec, sigma, p_t);
  return {std::move(h), std::move(s), std::move(slot)};
}

inline VectorXd random_unit_vector(CounterRng& rng, int dim) {
  std::normal_distribution<double> normal;
  VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v / v.norm();
}

/// Instance whose power budget makes `gamma` the RZF rescaling factor, with
/// x_bar a perturbed RZF point of norm `radius`. Received samples sit near
/// their symbols, which keeps the objective away from its flat regions.
struct OperatingPoint {
  Instance instance;
  VectorXd x_bar;
};

inline OperatingPoint operating_point(CounterRng& rng, const ConstellationSpec& spec, int users,
                                      int antennas, double sigma, double gamma,
                                      double perturbation = 0.1, double radius = 0.999) {
  ChannelMatrix h = draw_rayleigh_channel(users, antennas, rng);
  std::vector<Complex> s = random_symbols(rng, spec, users);
  const auto unit = linear_precode(h, s, 1.0, sigma, LinearPrecoder::rzf);
  const double p_t = (gamma / unit.gamma) * (gamma / unit.gamma);
  LiftedSlot slot = lift_slot(h, s, spec, sigma, p_t);
  VectorXd x = lift_signal(unit.x, 1.0) + perturbation * random_unit_vector(rng, 2 * antennas);
  x *= radius / x.norm();
  return {{std::move(h), std::move(s), std::move(slot)}, std::move(x)};
}

/// Empirical symbol errors of user k: transmit x, add CN(0, sigma^2) noise,
/// divide by gamma and slice. Uses only the physical model and the slicer.
inline long long simulate_user_errors(const ChannelMatrix& h, const VectorXcd& x, int k,
                                      Complex symbol, double gamma, double sigma,
                                      const ConstellationSpec& spec, long long draws,
                                      CounterRng& rng) {
  Complex hx = 0.0;
  for (int n = 0; n < h.antennas(); ++n) hx += h.entries()(k, n) * x(n);
  std::normal_distribution<double> normal(0.0, sigma / std::sqrt(2.0));
  long long errors = 0;
  for (long long i = 0; i < draws; ++i) {
    const Complex y = (hx + Complex(normal(rng), normal(rng))) / gamma;
    if (demodulate(y, spec) != symbol) ++errors;
  }
  return errors;
}

/// Central finite difference of f along direction e_i.
template <class F>
VectorXd central_difference(F&& f, const VectorXd& x, double h) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x;
    VectorXd xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

}  // namespace slp::testing
