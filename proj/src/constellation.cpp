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

#include "slp/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace slp {

ConstellationSpec build_constellation(int order, Normalization normalization,
                                      double half_distance) {
  if (order != 4 && order != 16 && order != 64 && order != 256) {
    throw std::invalid_argument("unsupported QAM order " + std::to_string(order) +
                                " (expected 4, 16, 64 or 256)");
  }
  const int m = static_cast<int>(std::lround(std::sqrt(order)));

  // Mean |s|^2 for d = 1: 2 * mean of squared odd levels = 2(M-1)/3.
  double unit_energy = 0.0;
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * i - (m - 1);
    unit_energy += a * a;
  }
  unit_energy = 2.0 * unit_energy / m;

  double d = half_distance;
  if (normalization == Normalization::unit_energy) {
    d = 1.0 / std::sqrt(unit_energy);
  } else if (!(d > 0.0) || !std::isfinite(d)) {
    throw std::invalid_argument("half distance must be positive and finite");
  }

  ConstellationSpec spec;
  spec.order = order;
  spec.half_distance = d;
  spec.levels.reserve(m);
  for (int i = 0; i < m; ++i) spec.levels.push_back((2.0 * i - (m - 1)) * d);
  spec.avg_energy = unit_energy * d * d;
  return spec;
}

Complex ConstellationSpec::point(int index) const {
  const int m = levels_per_dim();
  return {levels[index % m], levels[index / m]};
}

std::vector<Complex> ConstellationSpec::points() const {
  std::vector<Complex> out;
  out.reserve(order);
  for (int i = 0; i < order; ++i) out.push_back(point(i));
  return out;
}

bool ConstellationSpec::is_inner(double amplitude) const {
  return std::abs(amplitude) < max_level() - 0.5 * half_distance;
}

namespace {

bool level_on_grid(double v, const ConstellationSpec& spec) {
  const double d = spec.half_distance;
  const double z = std::abs(v) / d;
  const double odd = 2.0 * std::round((z - 1.0) / 2.0) + 1.0;
  return std::abs(z - odd) <= 1e-9 * std::max(1.0, z) && odd >= 1.0 &&
         odd <= spec.levels_per_dim() - 1 + 1e-9;
}

}  // namespace

bool on_grid(Complex s, const ConstellationSpec& spec) {
  return level_on_grid(s.real(), spec) && level_on_grid(s.imag(), spec);
}

Complex rotate_quarter_turns(Complex z, int quarter_turns) {
  double re = z.real();
  double im = z.imag();
  for (int i = 0; i < ((quarter_turns % 4) + 4) % 4; ++i) {
    const double t = re;  // (re + j im)(-j) = im - j re
    re = im;
    im = -t;
  }
  return {re, im};
}

RotatedSymbol rotate_symbol(Complex s, const ConstellationSpec& spec) {
  if (!on_grid(s, spec)) {
    throw std::invalid_argument("symbol is not a point of the " +
                                std::to_string(spec.order) + "-QAM grid");
  }
  // The quarter turn that maps the symbol's quadrant onto the first one.
  int k = 0;
  if (s.real() > 0 && s.imag() > 0) {
    k = 0;
  } else if (s.real() < 0 && s.imag() > 0) {
    k = 1;
  } else if (s.real() < 0 && s.imag() < 0) {
    k = 2;
  } else {
    k = 3;
  }
  const Complex hat = rotate_quarter_turns(s, k);

  RotatedSymbol r;
  r.quarter_turns = k;
  r.theta = (k == 3 ? -1 : k) * std::numbers::pi / 2.0;
  r.s_hat_r = hat.real();
  r.s_hat_i = hat.imag();
  r.b_r = spec.is_inner(hat.real()) ? 1 : 0;
  r.b_i = spec.is_inner(hat.imag()) ? 1 : 0;
  return r;
}

double slice(double v, const ConstellationSpec& spec) {
  const double d = spec.half_distance;
  const double a = std::abs(v) / d;
  // Boundaries sit at even multiples of d; a == 2j maps to 2j - 1.
  double mag = 2.0 * std::ceil(a / 2.0) - 1.0;
  mag = std::clamp(mag, 1.0, static_cast<double>(spec.levels_per_dim() - 1));
  return (v < 0.0 ? -mag : mag) * d;
}

Complex demodulate(Complex y, const ConstellationSpec& spec) {
  return {slice(y.real(), spec), slice(y.imag(), spec)};
}

}  // namespace slp
