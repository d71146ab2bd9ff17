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

#include "slp/ser_objective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slp {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_prime(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
  return -inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

void check_point(const LiftedSlot& slot, const VectorXd& x_bar, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("rescaling factor must be positive");
  if (x_bar.size() != slot.dim()) throw std::invalid_argument("x_bar has wrong dimension");
  if (!(x_bar.norm() <= 1.0 + 1e-9)) {
    throw std::invalid_argument("x_bar violates the unit power constraint");
  }
}

UserDeltas deltas_from_projection(const LiftedSlot& slot, double u, double v,
                                  double gamma, int k) {
  const double scale = std::numbers::sqrt2 / slot.sigma;
  const double d = slot.d;
  const double sr = slot.s_hat_r(k);
  const double si = slot.s_hat_i(k);
  UserDeltas out;
  out.r_minus = (gamma * sr - gamma * d - u) * scale;
  out.r_plus = (gamma * sr + gamma * d - u) * scale;
  out.i_minus = (gamma * si - gamma * d - v) * scale;
  out.i_plus = (gamma * si + gamma * d - v) * scale;
  out.s_r_plus = d + sr;
  out.s_r_minus = d - sr;
  out.s_i_plus = d + si;
  out.s_i_minus = d - si;
  return out;
}

// Per-dimension error rates. 1 - Q(r-) is evaluated as Q(-r-) so that tiny
// error rates keep full relative precision.
struct DimErrors {
  double e_r;
  double e_i;
};

DimErrors dim_errors(const UserDeltas& dl, double b_r, double b_i) {
  // Outer levels have no upper threshold; skip their (zero-weight) tail.
  return {q_function(-dl.r_minus) + (b_r != 0.0 ? b_r * q_function(dl.r_plus) : 0.0),
          q_function(-dl.i_minus) + (b_i != 0.0 ? b_i * q_function(dl.i_plus) : 0.0)};
}

double combine(const DimErrors& e) { return e.e_r + e.e_i - e.e_r * e.e_i; }

}  // namespace

UserDeltas user_deltas(const LiftedSlot& slot, const VectorXd& x_bar, double gamma,
                       int k) {
  check_point(slot, x_bar, gamma);
  return deltas_from_projection(slot, slot.f.col(k).dot(x_bar), slot.g.col(k).dot(x_bar),
                                gamma, k);
}

double per_user_ser(const LiftedSlot& slot, const VectorXd& x_bar, double gamma, int k) {
  if (k < 0 || k >= slot.users()) throw std::out_of_range("user index out of range");
  const UserDeltas dl = user_deltas(slot, x_bar, gamma, k);
  return combine(dim_errors(dl, slot.b_r(k), slot.b_i(k)));
}

double objective(const LiftedSlot& slot, const VectorXd& x_bar, double gamma) {
  check_point(slot, x_bar, gamma);
  double sum = 0.0;
  for (int k = 0; k < slot.users(); ++k) {
    const UserDeltas dl = deltas_from_projection(slot, slot.f.col(k).dot(x_bar),
                                                 slot.g.col(k).dot(x_bar), gamma, k);
    sum += combine(dim_errors(dl, slot.b_r(k), slot.b_i(k)));
  }
  return sum / slot.users();
}

Evaluation evaluate(const LiftedSlot& slot, const VectorXd& x_bar, double gamma) {
  check_point(slot, x_bar, gamma);
  const int users = slot.users();
  Evaluation ev;
  ev.grad_x = VectorXd::Zero(slot.dim());
  double sum = 0.0;
  double dgamma = 0.0;
  for (int k = 0; k < users; ++k) {
    const double b_r = slot.b_r(k);
    const double b_i = slot.b_i(k);
    const auto f = slot.f.col(k);
    const auto g = slot.g.col(k);
    const UserDeltas dl = deltas_from_projection(slot, f.dot(x_bar), g.dot(x_bar), gamma, k);
    const DimErrors e = dim_errors(dl, b_r, b_i);
    sum += combine(e);

    // Probabilities of a correct decision per dimension.
    const double pass_r = 1.0 - e.e_r;
    const double pass_i = 1.0 - e.e_i;
    const double qp_rm = q_prime(dl.r_minus);
    const double qp_rp = b_r != 0.0 ? q_prime(dl.r_plus) : 0.0;
    const double qp_im = q_prime(dl.i_minus);
    const double qp_ip = b_i != 0.0 ? q_prime(dl.i_plus) : 0.0;

    ev.grad_x += ((qp_rm - b_r * qp_rp) * pass_i) * f + (pass_r * (qp_im - b_i * qp_ip)) * g;
    dgamma += (dl.s_r_minus * qp_rm + b_r * dl.s_r_plus * qp_rp) * pass_i +
              pass_r * (dl.s_i_minus * qp_im + b_i * dl.s_i_plus * qp_ip);
  }
  const double scale = std::numbers::sqrt2 / slot.sigma / users;
  ev.value = sum / users;
  ev.grad_x *= scale;
  ev.grad_gamma = scale * dgamma;
  return ev;
}

VectorXd grad_x(const LiftedSlot& slot, const VectorXd& x_bar, double gamma) {
  return evaluate(slot, x_bar, gamma).grad_x;
}

double grad_gamma(const LiftedSlot& slot, const VectorXd& x_bar, double gamma) {
  return evaluate(slot, x_bar, gamma).grad_gamma;
}

}  // namespace slp
