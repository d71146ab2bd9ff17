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

#include <complex>
#include <vector>

namespace slp {

using Complex = std::complex<double>;

enum class Normalization {
  unit_energy,  ///< scale so the mean symbol energy is 1
  unit_d,       ///< use the caller-supplied half distance
};

/// Square M-QAM geometry. Per-dimension amplitudes are the odd multiples
/// {±d, ±3d, ..., ±(√M−1)d}.
struct ConstellationSpec {
  int order = 0;
  double half_distance = 0.0;
  std::vector<double> levels;  // ascending
  double avg_energy = 0.0;

  int levels_per_dim() const { return static_cast<int>(levels.size()); }
  double max_level() const { return levels.back(); }

  /// Point with linear index `index` in [0, order): real level index is
  /// index % √M, imaginary level index is index / √M.
  Complex point(int index) const;
  std::vector<Complex> points() const;

  /// True if `amplitude` is an inner level (two-sided decision region).
  bool is_inner(double amplitude) const;
};

ConstellationSpec build_constellation(int order, Normalization normalization,
                                      double half_distance = 1.0);

/// Quarter-turn rotation of a symbol into the first quadrant.
struct RotatedSymbol {
  int quarter_turns = 0;  // theta = quarter_turns * pi/2
  double theta = 0.0;
  double s_hat_r = 0.0;
  double s_hat_i = 0.0;
  int b_r = 0;  // 1 if the rotated real part is an inner level
  int b_i = 0;
};

RotatedSymbol rotate_symbol(Complex s, const ConstellationSpec& spec);

/// Multiply by e^{-j k pi/2} exactly (no trigonometric round-off).
Complex rotate_quarter_turns(Complex z, int quarter_turns);

/// Nearest level along one dimension; ties resolve toward the
/// smaller-magnitude level.
double slice(double v, const ConstellationSpec& spec);

/// Maximum-likelihood (minimum distance) symbol decision.
Complex demodulate(Complex y, const ConstellationSpec& spec);

/// True if `s` lies on the constellation grid (relative tolerance 1e-9).
bool on_grid(Complex s, const ConstellationSpec& spec);

}  // namespace slp
