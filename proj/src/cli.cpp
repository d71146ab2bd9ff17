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

#include "slp/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#ifndef SLP_VERSION
#define SLP_VERSION "0.0.0"
#endif

namespace slp {

using nlohmann::json;

std::string toolkit_version() { return SLP_VERSION; }

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<Precoder> parse_precoder_list(const std::string& text) {
  std::vector<Precoder> out;
  for (const auto& name : split(text, ',')) {
    const auto p = parse_precoder(name);
    if (!p) throw std::invalid_argument("unknown precoder '" + name + "'");
    if (std::find(out.begin(), out.end(), *p) != out.end()) {
      throw std::invalid_argument("precoder '" + name + "' listed twice");
    }
    out.push_back(*p);
  }
  if (out.empty()) throw std::invalid_argument("no precoders selected");
  return out;
}

Initializer parse_initializer(const std::string& name) {
  if (name == "rzf") return Initializer::rzf;
  if (name == "zf") return Initializer::zf;
  throw std::invalid_argument("initializer must be rzf or zf");
}

std::string initializer_name(Initializer i) {
  switch (i) {
    case Initializer::rzf:
      return "rzf";
    case Initializer::zf:
      return "zf";
    case Initializer::custom:
      return "custom";
  }
  return "?";
}

json line_search_json(const LineSearchParams& p) {
  return {{"initial_step", p.initial_step},
          {"contraction", p.contraction},
          {"sufficient_decrease", p.sufficient_decrease},
          {"max_backtracks", p.max_backtracks}};
}

LineSearchParams line_search_from(const json& j) {
  LineSearchParams p;
  p.initial_step = j.at("initial_step").get<double>();
  p.contraction = j.at("contraction").get<double>();
  p.sufficient_decrease = j.at("sufficient_decrease").get<double>();
  p.max_backtracks = j.at("max_backtracks").get<int>();
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("SNR range must be start:step:stop");
    const double start = to_double(parts[0]);
    const double step = to_double(parts[1]);
    const double stop = to_double(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("SNR step must be positive");
    for (int i = 0;; ++i) {
      const double v = start + i * step;
      if (v > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
      grid.push_back(v);
    }
  } else {
    for (const auto& item : split(text, ',')) {
      if (!item.empty()) grid.push_back(to_double(item));
    }
  }
  if (grid.empty()) throw std::invalid_argument("SNR grid is empty");
  return grid;
}

std::string manifest_to_json(const RunManifest& m) {
  json precoders = json::array();
  for (Precoder p : m.sweep.precoders) precoders.push_back(std::string(to_string(p)));
  json j;
  j["mode"] = m.mode == RunMode::sweep ? "sweep" : "scatter";
  j["sweep"] = {{"users", m.sweep.users},
                {"antennas", m.sweep.antennas},
                {"mod_order", m.sweep.mod_order},
                {"snr_db_grid", m.sweep.snr_db_grid},
                {"block_len", m.sweep.block_len},
                {"num_blocks", m.sweep.num_blocks},
                {"precoders", precoders},
                {"seed", m.sweep.seed}};
  j["dsao"] = {{"x_line_search", line_search_json(m.dsao.x_params)},
               {"gamma_line_search", line_search_json(m.dsao.gamma_params)},
               {"stop",
                {{"max_iters", m.dsao.stop.max_iters},
                 {"grad_tol", m.dsao.stop.grad_tol},
                 {"rel_obj_tol", m.dsao.stop.rel_obj_tol}}},
               {"gamma_floor", "initial_value"}};
  j["initializer"] = initializer_name(m.initializer);
  j["scatter_precoder"] = std::string(to_string(m.scatter_precoder));
  j["out"] = m.out;
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "sweep" && mode != "scatter") throw std::invalid_argument("bad mode " + mode);
    m.mode = mode == "sweep" ? RunMode::sweep : RunMode::scatter;
    const json& s = j.at("sweep");
    m.sweep.users = s.at("users").get<int>();
    m.sweep.antennas = s.at("antennas").get<int>();
    m.sweep.mod_order = s.at("mod_order").get<int>();
    m.sweep.snr_db_grid = s.at("snr_db_grid").get<std::vector<double>>();
    m.sweep.block_len = s.at("block_len").get<int>();
    m.sweep.num_blocks = s.at("num_blocks").get<int>();
    m.sweep.precoders.clear();
    for (const auto& name : s.at("precoders")) {
      const auto p = parse_precoder(name.get<std::string>());
      if (!p) throw std::invalid_argument("unknown precoder in manifest");
      m.sweep.precoders.push_back(*p);
    }
    m.sweep.seed = s.at("seed").get<std::uint64_t>();
    const json& d = j.at("dsao");
    m.dsao.x_params = line_search_from(d.at("x_line_search"));
    m.dsao.gamma_params = line_search_from(d.at("gamma_line_search"));
    m.dsao.stop.max_iters = d.at("stop").at("max_iters").get<int>();
    m.dsao.stop.grad_tol = d.at("stop").at("grad_tol").get<double>();
    m.dsao.stop.rel_obj_tol = d.at("stop").at("rel_obj_tol").get<double>();
    m.initializer = parse_initializer(j.at("initializer").get<std::string>());
    const auto sp = parse_precoder(j.at("scatter_precoder").get<std::string>());
    if (!sp) throw std::invalid_argument("unknown scatter precoder in manifest");
    m.scatter_precoder = *sp;
    m.out = j.at("out").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

RunManifest parse_args(int argc, const char* const* argv) {
  CLI::App app{"Symbol-level precoding SER simulator"};
  app.name("slp_sim");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "flat key=value file mirroring the long flag names");

  std::string manifest_file;
  int users = 0;
  int antennas = 0;
  int mod = 0;
  std::string snr = "0:2:30";
  int block = 500;
  int blocks = 200;
  std::string precoders = "asm,zf,rzf";
  std::uint64_t seed = 1;
  std::string out;
  int workers = 0;
  std::string init = "rzf";
  int max_iters = 200;
  double grad_tol = 1e-6;
  double rel_obj_tol = 1e-10;
  std::string scatter_precoder = "asm";

  app.add_option("--manifest", manifest_file, "re-run from a manifest JSON")
      ->check(CLI::ExistingFile);
  auto* o_users = app.add_option("--users", users, "number of users K")->check(CLI::PositiveNumber);
  auto* o_ant = app.add_option("--antennas", antennas, "transmit antennas N")
                    ->check(CLI::PositiveNumber);
  auto* o_mod = app.add_option("--mod", mod, "QAM order (4, 16, 64, 256)");
  auto* o_snr = app.add_option("--snr", snr, "SNR grid in dB: start:step:stop or a,b,c");
  auto* o_block = app.add_option("--block", block, "block length L")->check(CLI::PositiveNumber);
  auto* o_blocks = app.add_option("--blocks", blocks, "number of blocks per SNR point")
                       ->check(CLI::PositiveNumber);
  auto* o_prec = app.add_option("--precoders", precoders, "comma list of asm, zf, rzf");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_out = app.add_option("--out", out, "output CSV path");
  app.add_option("--workers", workers, "worker threads (default: SLP_WORKERS or all cores)");
  auto* o_init = app.add_option("--init", init, "DSAO initializer: rzf or zf");
  auto* o_iters = app.add_option("--max-iters", max_iters, "DSAO iteration cap")
                      ->check(CLI::PositiveNumber);
  auto* o_gtol = app.add_option("--grad-tol", grad_tol, "Riemannian gradient tolerance")
                     ->check(CLI::PositiveNumber);
  auto* o_rtol = app.add_option("--rel-obj-tol", rel_obj_tol, "relative objective tolerance")
                     ->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "SER versus SNR sweep (default)");
  sweep_cmd->fallthrough();
  auto* scatter_cmd =
      app.add_subcommand("scatter", "noise-free rescaled received samples at one SNR");
  scatter_cmd->fallthrough();
  auto* o_sprec = scatter_cmd->add_option("--precoder", scatter_precoder,
                                          "precoder whose samples are emitted");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help(), 2);
  }

  try {
    RunManifest m;
    const bool from_manifest = !manifest_file.empty();
    if (from_manifest) m = manifest_from_json(read_file(manifest_file));
    if (!from_manifest) {
      for (auto* o : {o_users, o_ant, o_mod}) {
        if (o->count() == 0) {
          throw UsageError(o->get_name() + " is required\n\n" + app.help(), 2);
        }
      }
    }
    const auto given = [](const CLI::Option* o) { return o->count() > 0; };
    if (*scatter_cmd) m.mode = RunMode::scatter;
    if (*sweep_cmd) m.mode = RunMode::sweep;
    if (given(o_users)) m.sweep.users = users;
    if (given(o_ant)) m.sweep.antennas = antennas;
    if (given(o_mod)) m.sweep.mod_order = mod;
    if (given(o_snr) || !from_manifest) m.sweep.snr_db_grid = parse_snr_grid(snr);
    if (given(o_block) || !from_manifest) m.sweep.block_len = block;
    if (given(o_blocks) || !from_manifest) m.sweep.num_blocks = blocks;
    if (given(o_prec) || !from_manifest) m.sweep.precoders = parse_precoder_list(precoders);
    if (given(o_seed) || !from_manifest) m.sweep.seed = seed;
    if (given(o_init) || !from_manifest) m.initializer = parse_initializer(init);
    if (given(o_iters)) m.dsao.stop.max_iters = max_iters;
    if (given(o_gtol)) m.dsao.stop.grad_tol = grad_tol;
    if (given(o_rtol)) m.dsao.stop.rel_obj_tol = rel_obj_tol;
    if (given(o_sprec)) {
      const auto p = parse_precoder(scatter_precoder);
      if (!p) throw std::invalid_argument("unknown precoder '" + scatter_precoder + "'");
      m.scatter_precoder = *p;
    }
    if (given(o_out)) {
      m.out = out;
    } else if (!from_manifest) {
      m.out = m.mode == RunMode::scatter ? "scatter.csv" : "results.csv";
    }
    m.seed = m.sweep.seed;
    m.workers = workers;
    m.version = toolkit_version();
    m.timestamp = utc_timestamp();

    m.sweep.validate();
    m.dsao.validate();
    if (m.mode == RunMode::scatter && m.sweep.snr_db_grid.size() != 1) {
      throw std::invalid_argument("scatter needs a single SNR point");
    }
    return m;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help(), 2);
  }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& results) {
  std::filesystem::path p = results;
  p.replace_extension(".manifest.json");
  return p;
}

std::string format_results_csv(std::vector<SerRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const SerRecord& a, const SerRecord& b) {
    if (a.precoder != b.precoder) return a.precoder < b.precoder;
    return a.snr_db < b.snr_db;
  });
  std::string out = "precoder,snr_db,trials,errors,ser,ci95\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%s,%.6g,%lld,%lld,%.9e,%.9e\n", r.precoder.c_str(),
                  r.snr_db, static_cast<long long>(r.trials), static_cast<long long>(r.errors),
                  r.ser, r.ci95_halfwidth);
    out += line;
  }
  return out;
}

std::string format_scatter_csv(const ScatterResult& scatter, int block_len) {
  std::string out = "user,slot,re,im\n";
  char line[160];
  for (const auto& s : scatter.samples) {
    std::snprintf(line, sizeof line, "%d,%lld,%.12e,%.12e\n", s.user,
                  static_cast<long long>(s.block) * block_len + s.slot, s.value.real(),
                  s.value.imag());
    out += line;
  }
  return out;
}

void write_results(const std::vector<SerRecord>& records, const std::filesystem::path& path,
                   const RunManifest& manifest) {
  write_file(path, format_results_csv(records));
  write_file(manifest_path_for(path), manifest_to_json(manifest));
}

void write_scatter(const ScatterResult& scatter, const std::filesystem::path& path,
                   const RunManifest& manifest) {
  write_file(path, format_scatter_csv(scatter, manifest.sweep.block_len));
  json j = json::parse(manifest_to_json(manifest));
  j["gamma_blk"] = scatter.gamma_blk;
  j["fraction_correct"] = scatter.fraction_correct;
  write_file(manifest_path_for(path), j.dump(2) + "\n");
}

}  // namespace slp
