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
#include <vector>

#include "slp/dsao.hpp"

namespace slp {

/// L x K symbols of one coherence block; row l holds the slot-l symbols.
using SymbolBlock = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BlockSlot {
  /// Unit-norm lift of the slot-l transmit vector under budget p_t_bar, so
  /// the transmitted signal is sqrt(p_t_bar) * unlift(x_pa).
  VectorXd x_pa;
  double p_t_bar = 1.0;
  PrecodeSolution original;
};

/// One rescaling factor shared by every slot of a block.
struct BlockPlan {
  double gamma_blk = 1.0;
  std::vector<BlockSlot> slots;

  /// Complex transmit vector of slot l.
  VectorXcd transmit(int l) const;
};

/// Power reallocation that maps per-slot factors gamma[l] onto
///   gamma_blk = sqrt(sum P[l] / sum(P[l] / gamma[l]^2)),
///   P_bar[l] = (gamma_blk / gamma[l])^2 P[l].
/// Total block power is conserved and h^T x / gamma is unchanged per slot.
BlockPlan unify_gamma(std::span<const PrecodeSolution> solutions,
                      std::span<const double> budgets);

/// Sphere-only polish of one slot at gamma_blk. `relifted` must be the slot
/// lifted with budget p_t_bar. Returns the updated x_pa; its objective never
/// exceeds that of the incoming x_pa.
VectorXd reoptimize_slot(const BlockSlot& plan_slot, const LiftedSlot& relifted,
                         double gamma_blk, const DsaoConfig& config,
                         DsaoTrace* trace = nullptr);

/// Stop criteria of the post-allocation polish pass: DSAO's, with half the
/// iteration budget.
StopCriteria polish_stop(const StopCriteria& stop);

struct BlockPlanOptions {
  Initializer initializer = Initializer::rzf;
  InitializerFn custom_initializer;
  bool reoptimize = true;
};

/// Per-slot DSAO, gamma unification, then per-slot re-optimization.
BlockPlan plan_block(const ChannelMatrix& h, const SymbolBlock& symbols,
                     const ConstellationSpec& spec, double sigma,
                     std::span<const double> budgets, const DsaoConfig& config,
                     const BlockPlanOptions& options = {});

/// Linear baseline under the same power reallocation (no re-optimization).
BlockPlan plan_linear_block(const ChannelMatrix& h, const SymbolBlock& symbols,
                            const ConstellationSpec& spec, double sigma, std::span<const double> budgets,
                            LinearPrecoder kind);

}  // namespace slp
