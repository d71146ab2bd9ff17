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

#include "slp/signal_model.hpp"

namespace slp {

/// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt(2)).
double q_function(double x);
/// dQ/dx = -exp(-x^2/2) / sqrt(2 pi).
double q_prime(double x);

/// Normalized decision margins of one user. The "minus" margins measure
/// the distance to the lower decision threshold, the "plus" margins the
/// distance to the upper one (present only for inner levels).
struct UserDeltas {
  double r_minus = 0.0;
  double r_plus = 0.0;
  double i_minus = 0.0;
  double i_plus = 0.0;
  double s_r_plus = 0.0;   // d + s_hat_r
  double s_r_minus = 0.0;  // d - s_hat_r
  double s_i_plus = 0.0;
  double s_i_minus = 0.0;
};

UserDeltas user_deltas(const LiftedSlot& slot, const VectorXd& x_bar, double gamma,
                       int k);

/// SER of user k: 1 - [Q(r-) - b_r Q(r+)] [Q(i-) - b_i Q(i+)].
double per_user_ser(const LiftedSlot& slot, const VectorXd& x_bar, double gamma,
                    int k);

/// Average SER over the K users of the slot.
double objective(const LiftedSlot& slot, const VectorXd& x_bar, double gamma);

/// Euclidean gradient of `objective` with respect to x_bar.
VectorXd grad_x(const LiftedSlot& slot, const VectorXd& x_bar, double gamma);

/// Derivative of `objective` with respect to gamma.
double grad_gamma(const LiftedSlot& slot, const VectorXd& x_bar, double gamma);

struct Evaluation {
  double value = 0.0;
  VectorXd grad_x;
  double grad_gamma = 0.0;
};

/// Objective and both gradients from a single pass over the users.
Evaluation evaluate(const LiftedSlot& slot, const VectorXd& x_bar, double gamma);

}  // namespace slp
