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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slp/block_scheme.hpp"

namespace slp {

enum class Precoder { asm_slp, zf, rzf };

/// "asm", "zf", "rzf".
std::string_view to_string(Precoder p);
std::optional<Precoder> parse_precoder(std::string_view name);

struct SweepConfig {
  int users = 8;
  int antennas = 8;
  int mod_order = 16;
  std::vector<double> snr_db_grid;
  int block_len = 500;
  int num_blocks = 200;
  std::vector<Precoder> precoders{Precoder::asm_slp, Precoder::zf, Precoder::rzf};
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimulationOptions {
  DsaoConfig dsao;
  Initializer initializer = Initializer::rzf;
  /// Worker threads; 0 reads SLP_WORKERS and falls back to the hardware
  /// concurrency.
  int workers = 0;
  /// Receives diagnostics (skipped blocks). Defaults to stderr.
  std::function<void(const std::string&)> log;
};

struct SerRecord {
  std::string precoder;
  double snr_db = 0.0;
  std::int64_t errors = 0;
  std::int64_t trials = 0;
  double ser = 0.0;
  double ci95_halfwidth = 0.0;
};

/// Discordant symbol counts of two precoders on identical draws.
struct PairedComparison {
  std::string first;
  std::string second;
  double snr_db = 0.0;
  std::int64_t first_only = 0;   // first wrong, second right
  std::int64_t second_only = 0;  // second wrong, first right
  std::int64_t trials = 0;

  /// (second_only - first_only) / sqrt(first_only + second_only): positive
  /// when `first` makes fewer errors. 0 when there is no discordant pair.
  double z_score() const;
};

struct SweepResult {
  std::vector<SerRecord> records;  // sorted by precoder name, then SNR
  std::vector<PairedComparison> paired;
  std::int64_t skipped_blocks = 0;
};

/// Noise standard deviation for SNR = 1 / sigma^2 (unit power budget).
double sigma_from_snr_db(double snr_db);

/// Everything random about one block: channel, symbols and unit-variance
/// noise. Substreams are keyed by (seed, snr_index, block_index[, slot]).
struct BlockDraw {
  ChannelMatrix channel;
  SymbolBlock symbols;  // L x K
  MatrixXcd noise;      // L x K, CN(0, 1)
};

BlockDraw draw_block(const SweepConfig& config, const ConstellationSpec& spec,
                     int snr_index, int block_index);

/// Unit-energy constellation used by the simulator.
ConstellationSpec simulation_constellation(int mod_order);

BlockPlan plan_for(Precoder p, const BlockDraw& draw, const ConstellationSpec& spec,
                   double sigma, const SimulationOptions& options);

SweepResult run_sweep(const SweepConfig& config, const SimulationOptions& options = {});

struct ScatterSample {
  int block = 0;
  int user = 0;
  int slot = 0;
  Complex value;
};

struct ScatterResult {
  std::vector<ScatterSample> samples;  // K * L * num_blocks entries
  std::vector<double> gamma_blk;       // one per block
  /// Fraction of samples whose decision equals the transmitted symbol.
  double fraction_correct = 0.0;
};

/// Noise-free rescaled received samples h_k^T x[l] / gamma_blk. `snr_db`
/// must be a point of the config grid.
ScatterResult emit_scatter(const SweepConfig& config, double snr_db, Precoder precoder,
                           const SimulationOptions& options = {});

int resolve_workers(int requested);

}  // namespace slp
