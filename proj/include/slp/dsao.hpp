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
#include <span>
#include <vector>

#include "slp/baselines.hpp"
#include "slp/manifold_opt.hpp"
#include "slp/signal_model.hpp"

namespace slp {

/// Lower bound applied to the rescaling factor during the gamma steps.
enum class GammaFloorMode {
  initial_value,  ///< gamma never drops below its initial value
};

struct DsaoConfig {
  LineSearchParams x_params;
  LineSearchParams gamma_params;
  StopCriteria stop;
  GammaFloorMode gamma_floor_mode = GammaFloorMode::initial_value;

  void validate() const;
};

enum class Initializer { rzf, zf, custom };

/// Supplies the transmit vector and rescaling factor used as the starting
/// point when Initializer::custom is selected.
using InitializerFn = std::function<LinearPrecodeResult(
    const ChannelMatrix& h, std::span<const Complex> symbols, double p_t, double sigma)>;

struct InitialPoint {
  VectorXd x_bar;
  double gamma = 1.0;
};

/// Lifts a full-power transmit vector into a starting point.
InitialPoint initial_point(const LinearPrecodeResult& start, double p_t);

InitialPoint initialize(const LiftedSlot& slot, const ChannelMatrix& h,
                        std::span<const Complex> symbols, Initializer kind,
                        const InitializerFn& custom = {});

enum class StopReason { grad_tol, rel_obj_tol, max_iters, line_search_failed };

struct DsaoTrace {
  std::vector<double> objective;  // entry 0 is the initial objective
  std::vector<double> gamma;
  int iterations = 0;
  StopReason reason = StopReason::max_iters;
  double final_rgrad_norm = 0.0;
};

/// Alternates one Armijo step of Riemannian descent on the unit sphere in
/// x_bar with one backtracking step in gamma, starting from `init`.
/// Deterministic; the objective sequence never increases.
PrecodeSolution solve_slot(const LiftedSlot& slot, const DsaoConfig& config,
                           const InitialPoint& init, DsaoTrace* trace = nullptr);

/// Sphere-only descent with gamma frozen.
PrecodeSolution descend_sphere(const LiftedSlot& slot, const VectorXd& x_bar, double gamma,
                               const LineSearchParams& params, const StopCriteria& stop,
                               DsaoTrace* trace = nullptr);

struct ComplexityEstimate {
  double flops_per_iteration = 0.0;    // analytic operation count
  double seconds_per_iteration = 0.0;  // median measured wall time
};

/// Times the fixed work of one outer iteration (objective, both gradients,
/// projection, retraction and one trial evaluation per half-step) on a
/// random N-antenna, K-user slot.
ComplexityEstimate complexity_probe(int antennas, int users, int repetitions = 20,
                                    int cycles_per_repetition = 2000);

}  // namespace slp
