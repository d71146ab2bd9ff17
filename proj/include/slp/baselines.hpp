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
#include <string_view>

#include "slp/signal_model.hpp"

namespace slp {

enum class LinearPrecoder { zf, rzf };

std::string_view to_string(LinearPrecoder kind);

struct LinearPrecoderKind {
  LinearPrecoder kind = LinearPrecoder::zf;
  double regularization = 0.0;  // diagonal loading; 0 for ZF

  static LinearPrecoderKind zero_forcing() { return {LinearPrecoder::zf, 0.0}; }
  /// Classical MMSE loading K * sigma^2.
  static LinearPrecoderKind regularized(int users, double sigma) {
    return {LinearPrecoder::rzf, users * sigma * sigma};
  }
  static LinearPrecoderKind make(LinearPrecoder kind, int users, double sigma) {
    return kind == LinearPrecoder::zf ? zero_forcing() : regularized(users, sigma);
  }
};

struct LinearPrecodeResult {
  VectorXcd x;
  double gamma = 1.0;
};

/// Precoding matrix W = H^H (H H^H + alpha I)^{-1} for one channel. Built
/// once per coherence block and applied slot by slot.
class LinearPrecoderMatrix {
 public:
  /// Throws std::runtime_error when H H^H is numerically singular
  /// (condition number above 1e12).
  LinearPrecoderMatrix(const ChannelMatrix& h, LinearPrecoderKind kind);

  /// x = beta W s with ||x||^2 = p_t. For ZF gamma = beta; for RZF gamma is
  /// beta times the mean real diagonal gain of H W.
  LinearPrecodeResult precode(std::span<const Complex> symbols, double p_t) const;

  const MatrixXcd& weights() const { return w_; }
  LinearPrecoderKind kind() const { return kind_; }

 private:
  LinearPrecoderKind kind_;
  MatrixXcd w_;
  double mean_gain_ = 1.0;
};

LinearPrecodeResult linear_precode(const ChannelMatrix& h, std::span<const Complex> symbols,
                                   double p_t, double sigma, LinearPrecoder kind);

}  // namespace slp
