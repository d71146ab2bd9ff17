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

#include "slp/dsao.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "slp/ser_objective.hpp"

namespace slp {

void DsaoConfig::validate() const {
  x_params.validate();
  gamma_params.validate();
  stop.validate();
}

InitialPoint initial_point(const LinearPrecodeResult& start, double p_t) {
  if (!(start.gamma > 0.0)) throw std::invalid_argument("initial gamma must be positive");
  InitialPoint out;
  out.x_bar = lift_signal(start.x, p_t);
  const double n = out.x_bar.norm();
  if (!(n > 0.0)) throw std::invalid_argument("initial transmit vector is zero");
  out.x_bar /= n;
  out.gamma = start.gamma;
  return out;
}

InitialPoint initialize(const LiftedSlot& slot, const ChannelMatrix& h,
                        std::span<const Complex> symbols, Initializer kind,
                        const InitializerFn& custom) {
  switch (kind) {
    case Initializer::zf:
      return initial_point(linear_precode(h, symbols, slot.p_t, slot.sigma, LinearPrecoder::zf),
                           slot.p_t);
    case Initializer::rzf:
      return initial_point(
          linear_precode(h, symbols, slot.p_t, slot.sigma, LinearPrecoder::rzf), slot.p_t);
    case Initializer::custom:
      if (!custom) throw std::invalid_argument("custom initializer requested but not supplied");
      return initial_point(custom(h, symbols, slot.p_t, slot.sigma), slot.p_t);
  }
  throw std::invalid_argument("unknown initializer");
}

namespace {

bool converged(double previous, double current, double rel_tol) {
  return previous - current <= rel_tol * std::abs(previous);
}

}  // namespace

PrecodeSolution solve_slot(const LiftedSlot& slot, const DsaoConfig& config,
                           const InitialPoint& init, DsaoTrace* trace) {
  config.validate();
  VectorXd x = init.x_bar / init.x_bar.norm();
  double gamma = init.gamma;
  if (!(gamma > 0.0)) throw std::invalid_argument("initial gamma must be positive");
  const double floor = gamma;

  Evaluation ev = evaluate(slot, x, gamma);
  if (!std::isfinite(ev.value)) throw std::domain_error("objective is not finite at init");
  if (trace) {
    *trace = DsaoTrace{};
    trace->objective.push_back(ev.value);
    trace->gamma.push_back(gamma);
  }

  StopReason reason = StopReason::max_iters;
  double rgrad_norm = 0.0;
  int iter = 0;
  for (; iter < config.stop.max_iters; ++iter) {
    rgrad_norm = tangent_project(x, ev.grad_x).norm();
    const bool gamma_stationary = std::abs(ev.grad_gamma) <= config.stop.grad_tol ||
                                  (ev.grad_gamma > 0.0 && gamma <= floor);
    if (rgrad_norm <= config.stop.grad_tol && gamma_stationary) {
      reason = StopReason::grad_tol;
      break;
    }
    const double previous = ev.value;

    const SphereStep xs = riemannian_descent_step(
        [&](const VectorXd& p) { return objective(slot, p, gamma); }, x, ev.value, ev.grad_x,
        config.x_params);
    Evaluation mid = xs.step > 0.0 ? evaluate(slot, xs.x, gamma) : std::move(ev);
    x = xs.x;

    const ScalarStep gs = scalar_descent_step(
        [&](double g) { return objective(slot, x, g); }, gamma, mid.value, mid.grad_gamma,
        floor, config.gamma_params);
    if (gs.step > 0.0) {
      gamma = gs.value;
      ev = evaluate(slot, x, gamma);
    } else {
      ev = std::move(mid);
    }
    if (trace) {
      trace->objective.push_back(ev.value);
      trace->gamma.push_back(gamma);
    }
    if (xs.step == 0.0 && gs.step == 0.0) {
      reason = StopReason::line_search_failed;
      ++iter;
      break;
    }
    if (converged(previous, ev.value, config.stop.rel_obj_tol)) {
      reason = StopReason::rel_obj_tol;
      ++iter;
      break;
    }
  }
  if (trace) {
    trace->iterations = iter;
    trace->reason = reason;
    trace->final_rgrad_norm = tangent_project(x, ev.grad_x).norm();
  }
  return {x, gamma, ev.value};
}

PrecodeSolution descend_sphere(const LiftedSlot& slot, const VectorXd& x_bar, double gamma,
                               const LineSearchParams& params, const StopCriteria& stop,
                               DsaoTrace* trace) {
  params.validate();
  stop.validate();
  VectorXd x = x_bar / x_bar.norm();
  Evaluation ev = evaluate(slot, x, gamma);
  if (!std::isfinite(ev.value)) throw std::domain_error("objective is not finite at start");
  if (trace) {
    *trace = DsaoTrace{};
    trace->objective.push_back(ev.value);
    trace->gamma.push_back(gamma);
  }
  const auto cost = [&](const VectorXd& p) { return objective(slot, p, gamma); };

  StopReason reason = StopReason::max_iters;
  int iter = 0;
  for (; iter < stop.max_iters; ++iter) {
    const double previous = ev.value;
    const SphereStep xs = riemannian_descent_step(cost, x, ev.value, ev.grad_x, params);
    if (xs.rgrad_norm <= stop.grad_tol) {
      reason = StopReason::grad_tol;
      break;
    }
    if (xs.step == 0.0) {
      reason = StopReason::line_search_failed;
      ++iter;
      break;
    }
    x = xs.x;
    ev = evaluate(slot, x, gamma);
    if (trace) {
      trace->objective.push_back(ev.value);
      trace->gamma.push_back(gamma);
    }
    if (converged(previous, ev.value, stop.rel_obj_tol)) {
      reason = StopReason::rel_obj_tol;
      ++iter;
      break;
    }
  }
  if (trace) {
    trace->iterations = iter;
    trace->reason = reason;
    trace->final_rgrad_norm = tangent_project(x, ev.grad_x).norm();
  }
  return {x, gamma, ev.value};
}

ComplexityEstimate complexity_probe(int antennas, int users, int repetitions,
                                    int cycles_per_repetition) {
  if (repetitions < 1 || cycles_per_repetition < 1) {
    throw std::invalid_argument("complexity probe needs positive repetition counts");
  }
  CounterRng rng(stream_key(0xC0FFEE, {static_cast<std::uint64_t>(antennas),
                                       static_cast<std::uint64_t>(users)}));
  const ConstellationSpec spec = build_constellation(16, Normalization::unit_energy);
  const ChannelMatrix h = draw_rayleigh_channel(users, antennas, rng);
  std::uniform_int_distribution<int> pick(0, spec.order - 1);
  std::vector<Complex> symbols(users);
  for (auto& s : symbols) s = spec.point(pick(rng));
  const LiftedSlot slot = lift_slot(h, symbols, spec, 0.1, 1.0);
  const InitialPoint init = initialize(slot, h, symbols, Initializer::rzf);

  std::vector<double> samples;
  samples.reserve(repetitions);
  volatile double sink = 0.0;
  for (int r = 0; r < repetitions; ++r) {
    VectorXd x = init.x_bar;
    const auto start = std::chrono::steady_clock::now();
    for (int c = 0; c < cycles_per_repetition; ++c) {
      const Evaluation ev = evaluate(slot, x, init.gamma);
      const VectorXd rg = tangent_project(x, ev.grad_x);
      const VectorXd trial = retract(x, -1e-3 * rg);
      sink = sink + objective(slot, trial, init.gamma) + objective(slot, x, 1.01 * init.gamma);
      x = trial;
    }
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double>(stop - start).count() /
                      cycles_per_repetition);
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());

  const double n = antennas;
  const double k = users;
  ComplexityEstimate out;
  // Three passes of 2K inner products of length 2N, the 2N x K gradient
  // accumulation, projection and retraction, plus per-user scalar work.
  out.flops_per_iteration = 3.0 * 8.0 * n * k + 8.0 * n * k + 16.0 * n + 3.0 * 60.0 * k;
  out.seconds_per_iteration = samples[samples.size() / 2];
  return out;
}

}  // namespace slp
