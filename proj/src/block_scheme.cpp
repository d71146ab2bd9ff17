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

#include "slp/block_scheme.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "slp/ser_objective.hpp"

namespace slp {

VectorXcd BlockPlan::transmit(int l) const {
  const BlockSlot& s = slots.at(l);
  return unlift_signal(s.x_pa, s.p_t_bar);
}

BlockPlan unify_gamma(std::span<const PrecodeSolution> solutions,
                      std::span<const double> budgets) {
  if (solutions.empty() || solutions.size() != budgets.size()) {
    throw std::invalid_argument("need one power budget per slot and at least one slot");
  }
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t l = 0; l < solutions.size(); ++l) {
    const double g = solutions[l].gamma;
    if (!(g > 0.0)) {
      throw std::invalid_argument("slot " + std::to_string(l) + " has non-positive gamma");
    }
    if (!(budgets[l] > 0.0)) throw std::invalid_argument("power budgets must be positive");
    total += budgets[l];
    weighted += budgets[l] / (g * g);
  }

  BlockPlan plan;
  plan.gamma_blk = std::sqrt(total / weighted);
  plan.slots.reserve(solutions.size());
  for (std::size_t l = 0; l < solutions.size(); ++l) {
    const double ratio = plan.gamma_blk / solutions[l].gamma;
    BlockSlot slot;
    slot.p_t_bar = ratio * ratio * budgets[l];
    // (gamma_blk / gamma) x_bar under the old lift is x_bar itself under the
    // new one.
    slot.x_pa = solutions[l].x_bar;
    slot.original = solutions[l];
    plan.slots.push_back(std::move(slot));
  }
  return plan;
}

StopCriteria polish_stop(const StopCriteria& stop) {
  StopCriteria out = stop;
  out.max_iters = std::max(1, stop.max_iters / 2);
  return out;
}

VectorXd reoptimize_slot(const BlockSlot& plan_slot, const LiftedSlot& relifted,
                         double gamma_blk, const DsaoConfig& config, DsaoTrace* trace) {
  if (std::abs(relifted.p_t - plan_slot.p_t_bar) > 1e-12 * plan_slot.p_t_bar) {
    throw std::invalid_argument("slot must be re-lifted with the reallocated budget");
  }
  return descend_sphere(relifted, plan_slot.x_pa, gamma_blk, config.x_params,
                        polish_stop(config.stop), trace)
      .x_bar;
}

namespace {

void check_block(const ChannelMatrix& h, const SymbolBlock& symbols,
                 std::span<const double> budgets) {
  if (symbols.rows() < 1) throw std::invalid_argument("block needs at least one slot");
  if (symbols.cols() != h.users()) throw std::invalid_argument("symbol block has wrong width");
  if (static_cast<Eigen::Index>(budgets.size()) != symbols.rows()) {
    throw std::invalid_argument("need one power budget per slot");
  }
}

std::span<const Complex> row(const SymbolBlock& symbols, Eigen::Index l) {
  return {symbols.data() + l * symbols.cols(), static_cast<std::size_t>(symbols.cols())};
}

}  // namespace

BlockPlan plan_block(const ChannelMatrix& h, const SymbolBlock& symbols,
                     const ConstellationSpec& spec, double sigma,
                     std::span<const double> budgets, const DsaoConfig& config,
                     const BlockPlanOptions& options) {
  check_block(h, symbols, budgets);
  const int slots = static_cast<int>(symbols.rows());

  std::optional<LinearPrecoderMatrix> linear;
  if (options.initializer == Initializer::zf) {
    linear.emplace(h, LinearPrecoderKind::zero_forcing());
  } else if (options.initializer == Initializer::rzf) {
    linear.emplace(h, LinearPrecoderKind::regularized(h.users(), sigma));
  }

  std::vector<LiftedSlot> lifted;
  std::vector<PrecodeSolution> solutions;
  lifted.reserve(slots);
  solutions.reserve(slots);
  for (int l = 0; l < slots; ++l) {
    const auto s = row(symbols, l);
    lifted.push_back(lift_slot(h, s, spec, sigma, budgets[l], l));
    const InitialPoint init =
        linear ? initial_point(linear->precode(s, budgets[l]), budgets[l])
               : initialize(lifted.back(), h, s, options.initializer,
                            options.custom_initializer);
    solutions.push_back(solve_slot(lifted.back(), config, init));
  }

  BlockPlan plan = unify_gamma(solutions, budgets);
  if (options.reoptimize) {
    for (int l = 0; l < slots; ++l) {
      BlockSlot& bs = plan.slots[l];
      bs.x_pa = reoptimize_slot(bs, with_budget(lifted[l], bs.p_t_bar), plan.gamma_blk, config);
    }
  }
  return plan;
}

BlockPlan plan_linear_block(const ChannelMatrix& h, const SymbolBlock& symbols,
                            const ConstellationSpec& spec, double sigma,
                            std::span<const double> budgets, LinearPrecoder kind) {
  check_block(h, symbols, budgets);
  const LinearPrecoderMatrix precoder(h, LinearPrecoderKind::make(kind, h.users(), sigma));
  std::vector<PrecodeSolution> solutions;
  solutions.reserve(symbols.rows());
  for (Eigen::Index l = 0; l < symbols.rows(); ++l) {
    const auto s = row(symbols, l);
    const InitialPoint p = initial_point(precoder.precode(s, budgets[l]), budgets[l]);
    const LiftedSlot slot = lift_slot(h, s, spec, sigma, budgets[l], static_cast<int>(l));
    solutions.push_back({p.x_bar, p.gamma, objective(slot, p.x_bar, p.gamma)});
  }
  return unify_gamma(solutions, budgets);
}

}  // namespace slp
