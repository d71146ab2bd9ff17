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

#include "slp/manifold_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace slp {

void LineSearchParams::validate() const {
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be positive");
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw std::invalid_argument("contraction must lie in (0, 1)");
  }
  if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0)) {
    throw std::invalid_argument("sufficient_decrease must lie in (0, 1)");
  }
  if (max_backtracks < 0) throw std::invalid_argument("max_backtracks must be >= 0");
}

void StopCriteria::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (!(rel_obj_tol > 0.0)) throw std::invalid_argument("rel_obj_tol must be positive");
}

VectorXd tangent_project(const VectorXd& x, const VectorXd& xi) {
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("tangent_project needs a unit-norm base point");
  }
  return xi - x * x.dot(xi);
}

VectorXd retract(const VectorXd& x, const VectorXd& xi) {
  VectorXd y = x + xi;
  const double n = y.norm();
  if (!(n >= 1e-14)) throw std::domain_error("retraction of an antipodal step is undefined");
  return y / n;
}

SphereStep riemannian_descent_step(const SphereCost& cost, const VectorXd& x,
                                   double cost_x, const VectorXd& egrad_x,
                                   const LineSearchParams& params) {
  if (!std::isfinite(cost_x) || !egrad_x.allFinite()) {
    throw std::domain_error("non-finite cost or gradient in sphere descent");
  }
  const VectorXd rgrad = tangent_project(x, egrad_x);
  const double g2 = rgrad.squaredNorm();

  SphereStep out;
  out.x = x;
  out.cost = cost_x;
  out.rgrad_norm = std::sqrt(g2);
  if (g2 == 0.0) return out;

  double t = params.initial_step;
  for (int i = 0; i <= params.max_backtracks; ++i, t *= params.contraction) {
    VectorXd trial = retract(x, -t * rgrad);
    const double c = cost(trial);
    ++out.evaluations;
    if (!std::isfinite(c)) throw std::domain_error("non-finite cost in sphere descent");
    if (c <= cost_x - params.sufficient_decrease * t * g2) {
      out.x = std::move(trial);
      out.cost = c;
      out.step = t;
      return out;
    }
  }
  return out;
}

SphereStep riemannian_descent_step(const SphereCost& cost, const SphereGradient& egrad,
                                   const VectorXd& x, const LineSearchParams& params) {
  const double c = cost(x);
  SphereStep out = riemannian_descent_step(cost, x, c, egrad(x), params);
  ++out.evaluations;
  return out;
}

ScalarStep scalar_descent_step(const ScalarFunction& cost, double value, double cost_value,
                               double grad_value, double lower_bound,
                               const LineSearchParams& params) {
  if (!std::isfinite(value) || !std::isfinite(cost_value) || !std::isfinite(grad_value) ||
      !std::isfinite(lower_bound)) {
    throw std::domain_error("non-finite input to scalar descent");
  }
  ScalarStep out;
  out.value = value;
  out.cost = cost_value;
  if (grad_value == 0.0) return out;

  const double g2 = grad_value * grad_value;
  double t = params.initial_step;
  for (int i = 0; i <= params.max_backtracks; ++i, t *= params.contraction) {
    const double candidate = value - t * grad_value;
    // Trial points at or below zero are outside the domain of the cost.
    if (!(candidate > 0.0) && lower_bound > 0.0) continue;
    const double c = cost(candidate);
    ++out.evaluations;
    if (!std::isfinite(c)) continue;
    if (c <= cost_value - params.sufficient_decrease * t * g2) {
      if (candidate < lower_bound) {
        out.floor_blocked = true;
        return out;
      }
      out.value = candidate;
      out.cost = c;
      out.step = t;
      return out;
    }
  }
  return out;
}

double scalar_descent_step(const ScalarFunction& cost, const ScalarFunction& grad,
                           double value, double lower_bound, const LineSearchParams& params) {
  if (!(value >= lower_bound)) throw std::invalid_argument("value starts below lower bound");
  return scalar_descent_step(cost, value, cost(value), grad(value), lower_bound, params).value;
}

}  // namespace slp
