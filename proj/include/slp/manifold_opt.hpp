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

#include <functional>

#include <Eigen/Dense>

namespace slp {

using Eigen::VectorXd;

/// Backtracking (Armijo) line-search settings.
struct LineSearchParams {
  double initial_step = 1.0;
  double contraction = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 30;

  void validate() const;
};

/// Outer-loop termination; whichever criterion is met first wins.
struct StopCriteria {
  int max_iters = 200;
  double grad_tol = 1e-6;
  double rel_obj_tol = 1e-10;

  void validate() const;
};

using SphereCost = std::function<double(const VectorXd&)>;
using SphereGradient = std::function<VectorXd(const VectorXd&)>;
using ScalarFunction = std::function<double(double)>;

/// P_x(xi) = xi - x x^T xi, the projection onto the tangent space of the
/// unit sphere at x.
VectorXd tangent_project(const VectorXd& x, const VectorXd& xi);

/// R_x(xi) = (x + xi) / ||x + xi||.
VectorXd retract(const VectorXd& x, const VectorXd& xi);

struct SphereStep {
  VectorXd x;
  double step = 0.0;  // 0 when no trial point passed the Armijo test
  double cost = 0.0;  // cost at x
  double rgrad_norm = 0.0;
  int evaluations = 0;
};

/// One Riemannian steepest-descent step on the sphere with Armijo
/// backtracking.
SphereStep riemannian_descent_step(const SphereCost& cost, const SphereGradient& egrad,
                                   const VectorXd& x, const LineSearchParams& params);

/// Same step when cost(x) and the Euclidean gradient at x are already known.
SphereStep riemannian_descent_step(const SphereCost& cost, const VectorXd& x,
                                   double cost_x, const VectorXd& egrad_x,
                                   const LineSearchParams& params);

struct ScalarStep {
  double value = 0.0;
  double cost = 0.0;
  double step = 0.0;
  bool floor_blocked = false;  // accepted candidate fell below the bound
  int evaluations = 0;
};

/// Backtracking gradient step on a scalar. The accepted candidate is
/// discarded (value unchanged) if it lies below `lower_bound`.
ScalarStep scalar_descent_step(const ScalarFunction& cost, double value, double cost_value,
                               double grad_value, double lower_bound,
                               const LineSearchParams& params);

double scalar_descent_step(const ScalarFunction& cost, const ScalarFunction& grad,
                           double value, double lower_bound, const LineSearchParams& params);

}  // namespace slp
