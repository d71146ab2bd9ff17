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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "slp/mc_sim.hpp"

namespace slp {

enum class RunMode { sweep, scatter };

/// Everything needed to reproduce a run.
struct RunManifest {
  RunMode mode = RunMode::sweep;
  SweepConfig sweep;
  DsaoConfig dsao;
  Initializer initializer = Initializer::rzf;
  Precoder scatter_precoder = Precoder::asm_slp;
  std::string out = "results.csv";
  std::string version;
  std::string timestamp;
  std::uint64_t seed = 1;  // mirrors sweep.seed
  int workers = 0;         // not serialized; does not affect results
};

/// Bad command line. `exit_code` is 0 for --help.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, int exit_code)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

/// Flags override config-file values, which override a loaded manifest,
/// which overrides defaults. Throws UsageError.
RunManifest parse_args(int argc, const char* const* argv);

/// "start:step:stop", a single value, or a comma list.
std::vector<double> parse_snr_grid(const std::string& text);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

/// Path of the manifest written next to a results file.
std::filesystem::path manifest_path_for(const std::filesystem::path& results);

/// CSV `precoder,snr_db,trials,errors,ser,ci95`, rows sorted by precoder
/// name then SNR.
std::string format_results_csv(std::vector<SerRecord> records);
/// CSV `user,slot,re,im`; slot counts across blocks (block * L + l).
std::string format_scatter_csv(const ScatterResult& scatter, int block_len);

/// Writes the CSV and its manifest. Throws std::runtime_error on I/O failure.
void write_results(const std::vector<SerRecord>& records, const std::filesystem::path& path,
                   const RunManifest& manifest);
void write_scatter(const ScatterResult& scatter, const std::filesystem::path& path,
                   const RunManifest& manifest);

std::string toolkit_version();

}  // namespace slp
