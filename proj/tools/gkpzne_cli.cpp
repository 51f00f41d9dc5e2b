// Copyright 2026 The gkpzne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkpzne/commands.hpp"
#include "gkpzne/io.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  bool resume = false;
  bool print_config = false;
  std::vector<double> x;
  std::optional<int> trials;
  std::optional<int> dim;
  std::optional<double> epsilon;
  std::optional<int> bootstrap;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--seed", o.seed, "Base random seed");
  cmd->add_option("--jobs", o.jobs, "Worker threads");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--resume", o.resume, "Reuse finished cells from an earlier run");
  cmd->add_flag("--print-config", o.print_config, "Print the resolved configuration and exit");
  cmd->add_option("--x", o.x, "Loss depths (replaces the configured list)");
  cmd->add_option("--trials", o.trials, "Random-state trials");
  cmd->add_option("--dim", o.dim, "Fock cutoff");
  cmd->add_option("--epsilon", o.epsilon, "Relative Petz regulariser");
  cmd->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples");
}

gkpzne::Config resolve(const std::string& command, const Overrides& o) {
  gkpzne::Config c;
  if (!o.config_path.empty()) c = gkpzne::load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.out) c.out_dir = *o.out;
  if (o.resume) c.resume = true;
  if (o.trials) c.trials = *o.trials;
  if (o.dim) c.dim = *o.dim;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.bootstrap) c.bootstrap = *o.bootstrap;
  if (!o.x.empty()) {
    if (command == "sweep") c.sweep_x = o.x;
    if (command == "threshold") c.threshold_x = o.x;
    if (command == "two-qubit") c.two_qubit_x = o.x;
    if (command == "random-coherence") c.coherence_x = o.x;
  }
  gkpzne::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-scaling extrapolation for GKP qubits under pure loss"};
  app.require_subcommand(1);
  Overrides o;
  using Runner = int (*)(const gkpzne::Config&, std::ostream&);
  const std::vector<std::pair<std::string, Runner>> commands{
      {"sweep", gkpzne::cmd_sweep},
      {"threshold", gkpzne::cmd_threshold},
      {"two-qubit", gkpzne::cmd_two_qubit},
      {"random-coherence", gkpzne::cmd_random_coherence},
      {"parity", gkpzne::cmd_parity},
      {"wigner", gkpzne::cmd_wigner},
  };
  const std::vector<std::string> help{
      "Single-qubit expectation over the energy schedule with extrapolation",
      "Extrapolated expectation across a grid of loss depths",
      "Bell-state correlators under independent loss",
      "Haar-random coherence error and extrapolation",
      "Parity analysis of stored coherence results",
      "Wigner functions of the encode, loss and recovery stages",
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    add_common(app.add_subcommand(commands[i].first, help[i]), o);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gkpzne::kExitConfig;
  }
  for (const auto& [name, run] : commands) {
    if (!app.got_subcommand(name)) continue;
    try {
      const gkpzne::Config config = resolve(name, o);
      if (o.print_config) {
        std::cout << gkpzne::dump_config(config);
        return gkpzne::kExitOk;
      }
      return run(config, std::cerr);
    } catch (const gkpzne::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return gkpzne::exit_code_for(e.kind());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return gkpzne::kExitNumerical;
    }
  }
  return gkpzne::kExitConfig;
}
