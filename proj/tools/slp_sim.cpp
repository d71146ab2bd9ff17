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

#include <cstdio>
#include <exception>
#include <iostream>

#include "slp/cli.hpp"

int main(int argc, char** argv) {
  slp::RunManifest manifest;
  try {
    manifest = slp::parse_args(argc, argv);
  } catch (const slp::UsageError& e) {
    (e.exit_code() == 0 ? std::cout : std::cerr) << e.what() << '\n';
    return e.exit_code();
  }

  slp::SimulationOptions options;
  options.dsao = manifest.dsao;
  options.initializer = manifest.initializer;
  options.workers = manifest.workers;

  try {
    if (manifest.mode == slp::RunMode::scatter) {
      const auto scatter = slp::emit_scatter(manifest.sweep, manifest.sweep.snr_db_grid.front(),
                                             manifest.scatter_precoder, options);
      slp::write_scatter(scatter, manifest.out, manifest);
      std::cout << "wrote " << scatter.samples.size() << " samples to " << manifest.out
                << " (fraction in correct region " << scatter.fraction_correct << ")\n";
      return 0;
    }
    const auto result = slp::run_sweep(manifest.sweep, options);
    slp::write_results(result.records, manifest.out, manifest);
    for (const auto& r : result.records) {
      std::printf("%-4s %6.2f dB  SER %.4e  (%lld/%lld)\n", r.precoder.c_str(), r.snr_db, r.ser,
                  static_cast<long long>(r.errors), static_cast<long long>(r.trials));
    }
    if (result.skipped_blocks > 0) {
      std::cerr << result.skipped_blocks << " block(s) skipped\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
