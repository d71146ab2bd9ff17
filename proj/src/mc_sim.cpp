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

#include "slp/mc_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace slp {

std::string_view to_string(Precoder p) {
  switch (p) {
    case Precoder::asm_slp:
      return "asm";
    case Precoder::zf:
      return "zf";
    case Precoder::rzf:
      return "rzf";
  }
  return "?";
}

std::optional<Precoder> parse_precoder(std::string_view name) {
  if (name == "asm") return Precoder::asm_slp;
  if (name == "zf") return Precoder::zf;
  if (name == "rzf") return Precoder::rzf;
  return std::nullopt;
}

void SweepConfig::validate() const {
  if (users < 1) throw std::invalid_argument("need at least one user");
  if (antennas < users) {
    throw std::invalid_argument("need antennas >= users (got K=" + std::to_string(users) +
                                ", N=" + std::to_string(antennas) + ")");
  }
  build_constellation(mod_order, Normalization::unit_energy);
  if (snr_db_grid.empty()) throw std::invalid_argument("SNR grid is empty");
  for (double s : snr_db_grid) {
    if (!std::isfinite(s)) throw std::invalid_argument("SNR grid has a non-finite entry");
  }
  if (block_len < 1) throw std::invalid_argument("block length must be >= 1");
  if (num_blocks < 1) throw std::invalid_argument("number of blocks must be >= 1");
  if (precoders.empty()) throw std::invalid_argument("no precoders selected");
}

double PairedComparison::z_score() const {
  const double discordant = static_cast<double>(first_only + second_only);
  if (discordant == 0.0) return 0.0;
  return static_cast<double>(second_only - first_only) / std::sqrt(discordant);
}

double sigma_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 20.0); }

ConstellationSpec simulation_constellation(int mod_order) {
  return build_constellation(mod_order, Normalization::unit_energy);
}

namespace {

enum StreamPurpose : std::uint64_t { channel_stream = 0, symbol_stream = 1, noise_stream = 2 };

}  // namespace

BlockDraw draw_block(const SweepConfig& config, const ConstellationSpec& spec, int snr_index,
                     int block_index) {
  const auto si = static_cast<std::uint64_t>(snr_index);
  const auto bi = static_cast<std::uint64_t>(block_index);
  CounterRng channel_rng(stream_key(config.seed, {si, bi, channel_stream}));
  ChannelMatrix channel = draw_rayleigh_channel(config.users, config.antennas, channel_rng);

  SymbolBlock symbols(config.block_len, config.users);
  MatrixXcd noise(config.block_len, config.users);
  std::uniform_int_distribution<int> pick(0, spec.order - 1);
  for (int l = 0; l < config.block_len; ++l) {
    const auto li = static_cast<std::uint64_t>(l);
    CounterRng symbol_rng(stream_key(config.seed, {si, bi, symbol_stream, li}));
    CounterRng noise_rng(stream_key(config.seed, {si, bi, noise_stream, li}));
    for (int k = 0; k < config.users; ++k) {
      symbols(l, k) = spec.point(pick(symbol_rng));
      noise(l, k) = complex_gaussian(noise_rng);
    }
  }
  return {std::move(channel), std::move(symbols), std::move(noise)};
}

BlockPlan plan_for(Precoder p, const BlockDraw& draw, const ConstellationSpec& spec,
                   double sigma, const SimulationOptions& options) {
  const std::vector<double> budgets(draw.symbols.rows(), 1.0);
  switch (p) {
    case Precoder::asm_slp: {
      BlockPlanOptions opts;
      opts.initializer = options.initializer;
      return plan_block(draw.channel, draw.symbols, spec, sigma, budgets, options.dsao, opts);
    }
    case Precoder::zf:
      return plan_linear_block(draw.channel, draw.symbols, spec, sigma, budgets,
                               LinearPrecoder::zf);
    case Precoder::rzf:
      return plan_linear_block(draw.channel, draw.symbols, spec, sigma, budgets,
                               LinearPrecoder::rzf);
  }
  throw std::invalid_argument("unknown precoder");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SLP_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

/// Runs fn(i) for i in [0, count) on `workers` threads. The first exception
/// thrown by any task is rethrown after all threads join.
template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct BlockOutcome {
  std::vector<std::int64_t> errors;     // per precoder
  std::vector<std::int64_t> trials;     // per precoder; 0 if skipped
  std::vector<std::int64_t> pair_a;     // per pair: first wrong only
  std::vector<std::int64_t> pair_b;     // per pair: second wrong only
  std::vector<std::int64_t> pair_n;     // per pair: jointly valid trials
  std::vector<std::string> diagnostics;
};

std::vector<std::uint8_t> transmit_block(const BlockPlan& plan, const BlockDraw& draw,
                                         const ConstellationSpec& spec, double sigma) {
  const int slots = static_cast<int>(draw.symbols.rows());
  const int users = static_cast<int>(draw.symbols.cols());
  std::vector<std::uint8_t> wrong(static_cast<std::size_t>(slots) * users);
  for (int l = 0; l < slots; ++l) {
    const VectorXcd x = plan.transmit(l);
    const VectorXcd noise = sigma * draw.noise.row(l).transpose();
    const VectorXcd y = received_signal(draw.channel, x, noise, plan.gamma_blk);
    for (int k = 0; k < users; ++k) {
      wrong[static_cast<std::size_t>(l) * users + k] =
          demodulate(y(k), spec) != draw.symbols(l, k) ? 1 : 0;
    }
  }
  return wrong;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, const SimulationOptions& options) {
  config.validate();
  options.dsao.validate();
  const ConstellationSpec spec = simulation_constellation(config.mod_order);
  const int workers = resolve_workers(options.workers);
  const auto log = options.log ? options.log
                               : std::function<void(const std::string&)>(
                                     [](const std::string& m) { std::cerr << m << '\n'; });
  const int np = static_cast<int>(config.precoders.size());
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < np; ++a) {
    for (int b = a + 1; b < np; ++b) pairs.emplace_back(a, b);
  }
  const int npairs = static_cast<int>(pairs.size());

  SweepResult result;
  for (int si = 0; si < static_cast<int>(config.snr_db_grid.size()); ++si) {
    const double snr_db = config.snr_db_grid[si];
    const double sigma = sigma_from_snr_db(snr_db);
    std::vector<BlockOutcome> outcomes(config.num_blocks);

    parallel_for(config.num_blocks, workers, [&](int b) {
      const BlockDraw draw = draw_block(config, spec, si, b);
      BlockOutcome& out = outcomes[b];
      out.errors.assign(np, 0);
      out.trials.assign(np, 0);
      out.pair_a.assign(npairs, 0);
      out.pair_b.assign(npairs, 0);
      out.pair_n.assign(npairs, 0);
      std::vector<std::vector<std::uint8_t>> wrong(np);
      for (int p = 0; p < np; ++p) {
        try {
          const BlockPlan plan = plan_for(config.precoders[p], draw, spec, sigma, options);
          wrong[p] = transmit_block(plan, draw, spec, sigma);
        } catch (const std::runtime_error& e) {
          out.diagnostics.push_back("skipped block " + std::to_string(b) + " at SNR " +
                                    std::to_string(snr_db) + " dB for " +
                                    std::string(to_string(config.precoders[p])) + ": " +
                                    e.what());
          continue;
        }
        out.trials[p] = static_cast<std::int64_t>(wrong[p].size());
        for (std::uint8_t w : wrong[p]) out.errors[p] += w;
      }
      for (int q = 0; q < npairs; ++q) {
        const auto& wa = wrong[pairs[q].first];
        const auto& wb = wrong[pairs[q].second];
        if (wa.empty() || wb.empty()) continue;
        out.pair_n[q] = static_cast<std::int64_t>(wa.size());
        for (std::size_t i = 0; i < wa.size(); ++i) {
          out.pair_a[q] += (wa[i] && !wb[i]) ? 1 : 0;
          out.pair_b[q] += (wb[i] && !wa[i]) ? 1 : 0;
        }
      }
    });

    std::vector<std::int64_t> errors(np, 0);
    std::vector<std::int64_t> trials(np, 0);
    std::vector<PairedComparison> paired(npairs);
    for (int q = 0; q < npairs; ++q) {
      paired[q].first = to_string(config.precoders[pairs[q].first]);
      paired[q].second = to_string(config.precoders[pairs[q].second]);
      paired[q].snr_db = snr_db;
    }
    for (const BlockOutcome& out : outcomes) {
      for (const auto& msg : out.diagnostics) {
        log(msg);
        ++result.skipped_blocks;
      }
      for (int p = 0; p < np; ++p) {
        errors[p] += out.errors[p];
        trials[p] += out.trials[p];
      }
      for (int q = 0; q < npairs; ++q) {
        paired[q].first_only += out.pair_a[q];
        paired[q].second_only += out.pair_b[q];
        paired[q].trials += out.pair_n[q];
      }
    }
    for (int p = 0; p < np; ++p) {
      SerRecord rec;
      rec.precoder = to_string(config.precoders[p]);
      rec.snr_db = snr_db;
      rec.errors = errors[p];
      rec.trials = trials[p];
      if (rec.trials > 0) {
        rec.ser = static_cast<double>(rec.errors) / static_cast<double>(rec.trials);
        rec.ci95_halfwidth =
            1.96 * std::sqrt(rec.ser * (1.0 - rec.ser) / static_cast<double>(rec.trials));
      }
      result.records.push_back(std::move(rec));
    }
    for (auto& pc : paired) result.paired.push_back(std::move(pc));
  }

  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const SerRecord& a, const SerRecord& b) {
                     if (a.precoder != b.precoder) return a.precoder < b.precoder;
                     return a.snr_db < b.snr_db;
                   });
  return result;
}

ScatterResult emit_scatter(const SweepConfig& config, double snr_db, Precoder precoder,
                           const SimulationOptions& options) {
  config.validate();
  const auto it = std::find(config.snr_db_grid.begin(), config.snr_db_grid.end(), snr_db);
  if (it == config.snr_db_grid.end()) {
    throw std::invalid_argument("scatter SNR is not a point of the configured grid");
  }
  const int si = static_cast<int>(it - config.snr_db_grid.begin());
  const ConstellationSpec spec = simulation_constellation(config.mod_order);
  const double sigma = sigma_from_snr_db(snr_db);

  const int slots = config.block_len;
  const int users = config.users;
  std::vector<BlockPlan> plans(config.num_blocks);
  std::vector<BlockDraw> draws;
  draws.reserve(config.num_blocks);
  for (int b = 0; b < config.num_blocks; ++b) draws.push_back(draw_block(config, spec, si, b));
  parallel_for(config.num_blocks, resolve_workers(options.workers),
               [&](int b) { plans[b] = plan_for(precoder, draws[b], spec, sigma, options); });

  ScatterResult out;
  out.samples.reserve(static_cast<std::size_t>(config.num_blocks) * slots * users);
  std::int64_t correct = 0;
  for (int b = 0; b < config.num_blocks; ++b) {
    const BlockPlan& plan = plans[b];
    out.gamma_blk.push_back(plan.gamma_blk);
    for (int l = 0; l < slots; ++l) {
      const VectorXcd rx = draws[b].channel.entries() * plan.transmit(l) / plan.gamma_blk;
      for (int k = 0; k < users; ++k) {
        out.samples.push_back({b, k, l, rx(k)});
        correct += demodulate(rx(k), spec) == draws[b].symbols(l, k) ? 1 : 0;
      }
    }
  }
  out.fraction_correct = static_cast<double>(correct) / static_cast<double>(out.samples.size());
  return out;
}

}  // namespace slp
