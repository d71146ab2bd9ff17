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

#include "slp/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace slp {

std::string_view to_string(LinearPrecoder kind) {
  return kind == LinearPrecoder::zf ? "zf" : "rzf";
}

LinearPrecoderMatrix::LinearPrecoderMatrix(const ChannelMatrix& h, LinearPrecoderKind kind)
    : kind_(kind) {
  if (kind.kind == LinearPrecoder::zf && kind.regularization != 0.0) {
    throw std::invalid_argument("zero forcing takes no regularization");
  }
  if (!(kind.regularization >= 0.0)) {
    throw std::invalid_argument("regularization must be nonnegative");
  }
  const MatrixXcd& hm = h.entries();
  const int users = h.users();
  MatrixXcd gram = hm * hm.adjoint();
  gram.diagonal().array() += kind.regularization;

  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw std::runtime_error("H H^H is rank deficient (condition number > 1e12)");
  }
  w_ = hm.adjoint() * gram.llt().solve(MatrixXcd::Identity(users, users));
  mean_gain_ = (hm * w_).diagonal().real().mean();
}

LinearPrecodeResult LinearPrecoderMatrix::precode(std::span<const Complex> symbols,
                                                  double p_t) const {
  if (static_cast<Eigen::Index>(symbols.size()) != w_.cols()) {
    throw std::invalid_argument("expected one symbol per user");
  }
  if (!(p_t > 0.0)) throw std::invalid_argument("power budget must be positive");
  const Eigen::Map<const VectorXcd> s(symbols.data(), w_.cols());
  LinearPrecodeResult out;
  out.x = w_ * s;
  const double beta = std::sqrt(p_t) / out.x.norm();
  out.x *= beta;
  out.gamma = kind_.kind == LinearPrecoder::zf ? beta : beta * mean_gain_;
  return out;
}

LinearPrecodeResult linear_precode(const ChannelMatrix& h, std::span<const Complex> symbols,
                                   double p_t, double sigma, LinearPrecoder kind) {
  return LinearPrecoderMatrix(h, LinearPrecoderKind::make(kind, h.users(), sigma))
      .precode(symbols, p_t);
}

}  // namespace slp
